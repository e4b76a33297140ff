//! Fractional Gaussian noise via circulant embedding (Davies-Harte).

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{require_count, FgnParams, IncrementSeries, NoiseModel};
use crate::error::require_positive;
use crate::{Error, GaussianStream, Result};

/// Below this length a non-embeddable covariance falls back to the exact
/// sequential (Durbin-Levinson) generator, which costs O(n²).
const SEQUENTIAL_FALLBACK_MAX: usize = 1 << 14;

/// Eigenvalues below `−EIGEN_TOL · max λ` mean the embedding is not
/// nonnegative definite; anything above is rounding and is clamped to zero.
const EIGEN_TOL: f64 = 1e-10;

/// `Cov(B^H_t, B^H_{t+τ}) = (t^{2H} + (t+τ)^{2H} − τ^{2H}) / 2` for `t, τ ≥ 0`.
pub fn fbm_autocov(params: FgnParams, t: f64, tau: f64) -> Result<f64> {
    params.validate()?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::param("t", t, "must be >= 0"));
    }
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::param("tau", tau, "must be >= 0"));
    }
    let h2 = 2.0 * params.hurst;
    Ok(0.5 * (t.powf(h2) + (t + tau).powf(h2) - tau.powf(h2)))
}

/// Autocovariance of unit-step fGn at integer lag `k`:
/// `(|k+1|^{2H} − 2|k|^{2H} + |k−1|^{2H}) / 2`.
pub fn fgn_autocov(hurst: f64, lag: u64) -> f64 {
    let h2 = 2.0 * hurst;
    let k = lag as f64;
    if lag == 0 {
        return 1.0;
    }
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).powf(h2))
}

/// Increments `B^H_{(k+1)dt} − B^H_{k dt}`, `k = 0..n`, each `~ N(0, dt^{2H})`.
pub fn fgn_sample(
    params: FgnParams,
    dt: f64,
    n: usize,
    stream: &mut GaussianStream,
) -> Result<IncrementSeries> {
    params.validate()?;
    require_positive("dt", dt)?;
    require_count(n)?;
    let unit = match circulant(params.hurst, n, stream)? {
        Some(v) => v,
        None if n < SEQUENTIAL_FALLBACK_MAX => {
            log::debug!("circulant embedding not PSD for n={n}, using sequential generator");
            sequential_unit(params.hurst, n, stream)
        }
        None => {
            return Err(Error::Numerical(format!(
                "circulant embedding of fGn covariance (H={}) is not nonnegative definite for n={n}",
                params.hurst
            )))
        }
    };
    let scale = dt.powf(params.hurst);
    let values = unit.into_iter().map(|v| v * scale).collect();
    IncrementSeries::new(dt, values, NoiseModel::Fgn(params))
}

/// Exact fGn by the Durbin-Levinson recursion (Hosking's method).
///
/// Same law as [`fgn_sample`]; always succeeds but is quadratic in `n`.
pub fn fgn_sample_sequential(
    params: FgnParams,
    dt: f64,
    n: usize,
    stream: &mut GaussianStream,
) -> Result<IncrementSeries> {
    params.validate()?;
    require_positive("dt", dt)?;
    require_count(n)?;
    let scale = dt.powf(params.hurst);
    let values = sequential_unit(params.hurst, n, stream)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    IncrementSeries::new(dt, values, NoiseModel::Fgn(params))
}

fn circulant(hurst: f64, n: usize, stream: &mut GaussianStream) -> Result<Option<Vec<f64>>> {
    if n == 1 {
        return Ok(Some(vec![stream.next_gaussian()]));
    }
    let m = (2 * (n - 1)).next_power_of_two();
    let mut row: Vec<Complex64> = (0..m)
        .map(|j| Complex64::new(fgn_autocov(hurst, j.min(m - j) as u64), 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);

    let max = row.iter().map(|c| c.re).fold(f64::MIN, f64::max);
    let min = row.iter().map(|c| c.re).fold(f64::MAX, f64::min);
    if min < -EIGEN_TOL * max {
        return Ok(None);
    }

    let half = m / 2;
    let mf = m as f64;
    let mut v = vec![Complex64::new(0.0, 0.0); m];
    let eig = |k: usize| row[k].re.max(0.0);
    v[0] = Complex64::new((eig(0) / mf).sqrt() * stream.next_gaussian(), 0.0);
    v[half] = Complex64::new((eig(half) / mf).sqrt() * stream.next_gaussian(), 0.0);
    for k in 1..half {
        let s = (eig(k) / (2.0 * mf)).sqrt();
        let re = stream.next_gaussian();
        let im = stream.next_gaussian();
        v[k] = Complex64::new(s * re, s * im);
        v[m - k] = v[k].conj();
    }
    fft.process(&mut v);
    Ok(Some(v[..n].iter().map(|c| c.re).collect()))
}

fn sequential_unit(hurst: f64, n: usize, stream: &mut GaussianStream) -> Vec<f64> {
    let gamma: Vec<f64> = (0..n as u64).map(|k| fgn_autocov(hurst, k)).collect();
    let mut out = Vec::with_capacity(n);
    out.push(stream.next_gaussian() * gamma[0].sqrt());
    // coef[j] is the weight on x_{t−1−j} in the one-step predictor.
    let mut coef: Vec<f64> = Vec::with_capacity(n);
    let mut prev: Vec<f64> = Vec::with_capacity(n);
    let mut var = gamma[0];
    for t in 1..n {
        let acc: f64 = coef.iter().enumerate().map(|(j, c)| c * gamma[t - 1 - j]).sum();
        let reflection = (gamma[t] - acc) / var;
        prev.clear();
        prev.extend_from_slice(&coef);
        for j in 0..prev.len() {
            coef[j] = prev[j] - reflection * prev[prev.len() - 1 - j];
        }
        coef.push(reflection);
        var *= 1.0 - reflection * reflection;
        let pred: f64 = coef.iter().enumerate().map(|(j, c)| c * out[t - 1 - j]).sum();
        out.push(pred + var.max(0.0).sqrt() * stream.next_gaussian());
    }
    out
}
