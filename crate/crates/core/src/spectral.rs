//! Empirical estimators: periodogram, band averaging, autocovariance and
//! log-log slope fits.
//!
//! The periodogram is the raw (untapered) finite-time estimate
//! `P(ω_j) = |Σ_k e^{−iω_j k dt} ΔY_k|² / (n dt)` at the Fourier frequencies
//! `ω_j = 2πj / (n dt)`, `j = 1..⌊n/2⌋`. The transform is a real-input FFT of
//! arbitrary length; results are deterministic for a given input.

use std::fmt;
use std::str::FromStr;

use realfft::RealFftPlanner;

use crate::noise::{IncrementSeries, TimeSeries};
use crate::stats::{linear_fit, mean, symmetric_sum};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    /// Ascending angular frequencies, zero excluded.
    pub omegas: Vec<f64>,
    pub powers: Vec<f64>,
    pub n_samples: usize,
    pub dt: f64,
}

impl Periodogram {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Nyquist angular frequency `π / dt`.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.dt
    }

    /// Pointwise mean of periodograms on the same grid (replica averaging).
    pub fn mean_of(items: &[Periodogram]) -> Result<Periodogram> {
        let first = items
            .first()
            .ok_or_else(|| Error::InsufficientData("no periodograms to average".into()))?;
        if items
            .iter()
            .any(|p| p.n_samples != first.n_samples || p.dt != first.dt)
        {
            return Err(Error::Unsupported("periodograms are on different grids".into()));
        }
        let mut powers = vec![0.0; first.len()];
        for p in items {
            for (acc, v) in powers.iter_mut().zip(&p.powers) {
                *acc += v;
            }
        }
        let k = items.len() as f64;
        powers.iter_mut().for_each(|v| *v /= k);
        Ok(Periodogram {
            omegas: first.omegas.clone(),
            powers,
            n_samples: first.n_samples,
            dt: first.dt,
        })
    }
}

/// Band-averaged spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgSpectrum {
    /// Mean angular frequency of each band.
    pub omegas: Vec<f64>,
    pub powers: Vec<f64>,
    pub band_width: usize,
}

impl AvgSpectrum {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AcfMode {
    Covariance,
    #[default]
    Correlation,
}

impl FromStr for AcfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "covariance" | "cov" => Ok(AcfMode::Covariance),
            "correlation" | "corr" => Ok(AcfMode::Correlation),
            other => Err(Error::Parse(format!("unknown ACF mode `{other}`"))),
        }
    }
}

impl fmt::Display for AcfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcfMode::Covariance => "covariance",
            AcfMode::Correlation => "correlation",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcfEstimate {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
    pub mode: AcfMode,
}

/// Raw periodogram of an increment series.
pub fn periodogram(incr: &IncrementSeries) -> Result<Periodogram> {
    periodogram_of(&incr.values, incr.dt)
}

/// Periodogram of an arbitrary real sequence sampled at step `dt`.
pub fn periodogram_of(values: &[f64], dt: f64) -> Result<Periodogram> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "periodogram needs at least 2 samples, got {n}"
        )));
    }
    crate::error::require_positive("dt", dt)?;
    let mut planner = RealFftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let mut input = values.to_vec();
    let mut spectrum = fft.make_output_vec();
    fft.process(&mut input, &mut spectrum)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let half = n / 2;
    let norm = 1.0 / (n as f64 * dt);
    let base = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    let omegas = (1..=half).map(|j| base * j as f64).collect();
    let powers = spectrum[1..=half].iter().map(|c| c.norm_sqr() * norm).collect();
    Ok(Periodogram {
        omegas,
        powers,
        n_samples: n,
        dt,
    })
}

/// Disjoint blocks of `band_width` neighbouring frequencies reduced to their
/// mean frequency and mean power. A trailing partial block is dropped.
pub fn band_average(p: &Periodogram, band_width: usize) -> Result<AvgSpectrum> {
    if band_width == 0 {
        return Err(Error::param("band_width", 0.0, "must be >= 1"));
    }
    if band_width > p.len() {
        return Err(Error::InsufficientData(format!(
            "band width {band_width} exceeds {} raw frequencies",
            p.len()
        )));
    }
    let bands = p.len() / band_width;
    let mut omegas = Vec::with_capacity(bands);
    let mut powers = Vec::with_capacity(bands);
    for b in 0..bands {
        let r = b * band_width..(b + 1) * band_width;
        omegas.push(mean(&p.omegas[r.clone()]));
        powers.push(mean(&p.powers[r]));
    }
    Ok(AvgSpectrum {
        omegas,
        powers,
        band_width,
    })
}

/// Empirical autocovariance / autocorrelation for lags `0..=max_lag`.
///
/// Uses the biased normalisation `ĉ(m) = Σ (x_k − x̄)(x_{k+m} − x̄) / n`,
/// which keeps the estimate nonnegative definite. Sums are reversal
/// invariant, so a reversed series gives bit-identical output. Keep
/// `max_lag` well below `n / 10` for a usable estimate.
pub fn empirical_acf(series: &TimeSeries, max_lag: usize, mode: AcfMode) -> Result<AcfEstimate> {
    let x = &series.values;
    let n = x.len();
    if max_lag >= n {
        return Err(Error::InsufficientData(format!(
            "max_lag {max_lag} must be below the series length {n}"
        )));
    }
    if max_lag * 10 >= n {
        log::warn!("max_lag {max_lag} is not small against n = {n}; estimates will be noisy");
    }
    let m = mean(x);
    let d: Vec<f64> = x.iter().map(|v| v - m).collect();
    let mut prod = vec![0.0; n];
    let mut values = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag {
        let len = n - lag;
        for k in 0..len {
            prod[k] = d[k] * d[k + lag];
        }
        values.push(symmetric_sum(&prod[..len]) / n as f64);
    }
    if mode == AcfMode::Correlation {
        let c0 = values[0];
        if c0.is_nan() || c0 <= 0.0 {
            return Err(Error::Numerical(
                "zero variance: autocorrelation is undefined for a constant series".into(),
            ));
        }
        values.iter_mut().for_each(|v| *v /= c0);
        values[0] = 1.0;
    }
    Ok(AcfEstimate {
        lags: (0..=max_lag).collect(),
        values,
        mode,
    })
}

/// Minimum number of bands a slope fit must cover.
pub const MIN_SLOPE_BANDS: usize = 8;

/// OLS fit of `ln P` against `ln ω` over bands with `ω ∈ [omega_min, omega_max]`.
/// Returns `(slope, intercept)`.
pub fn loglog_slope(spec: &AvgSpectrum, omega_min: f64, omega_max: f64) -> Result<(f64, f64)> {
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (w, p) in spec.omegas.iter().zip(&spec.powers) {
        if *w < omega_min || *w > omega_max {
            continue;
        }
        if p.is_nan() || *p <= 0.0 || *w <= 0.0 {
            return Err(Error::param("power", *p, "log-log fit needs positive power and frequency"));
        }
        lx.push(w.ln());
        ly.push(p.ln());
    }
    if lx.len() < MIN_SLOPE_BANDS {
        return Err(Error::InsufficientData(format!(
            "{} bands in [{omega_min}, {omega_max}], need at least {MIN_SLOPE_BANDS}",
            lx.len()
        )));
    }
    Ok(linear_fit(&lx, &ly))
}

/// Mean of the raw powers (diagnostic; equals `Var(ΔY)/dt` for white input).
pub fn mean_power(p: &Periodogram) -> f64 {
    symmetric_sum(&p.powers) / p.len() as f64
}
