//! Finite-horizon spectra and the martingale-part experiment.
//!
//! For `U` a stationary OU process with rate `θ`,
//!
//! ```text
//! f₁(T, ω, θ) = E|∫₀ᵀ e^{−iωt} U_t dt|²
//!             = (1/2θ) ∬_{[0,T]²} e^{−iω(t−s)} e^{−θ|t−s|} ds dt
//! f₂(T, ω, θ) = ∫₀ᵀ ∫₀ᵗ e^{−iω(s−t)} e^{−θ(t−s)} ds dt
//! ```
//!
//! and the finite-time PSD of `dY = γU dt + dW` is
//! `(γ²f₁ + 2γ Re f₂ + T) / T`. The experiment estimates the finite-time PSD
//! of `dY = U dt + β dW` by replica-averaged periodograms and shows that a
//! non-zero martingale part leaves a high-frequency plateau at `β²`, while
//! `β = 0` gives an `ω⁻²` decay towards zero.

use num_complex::Complex64;

use crate::error::require_positive;
use crate::noise::{ou_exact_sample, NoiseModel, OuParams};
use crate::spectral::periodogram_of;
use crate::stats::linear_fit;
use crate::{Error, GaussianStream, Result};

/// Below this `|zT|` the closed forms switch to their Taylor series.
const SERIES_SWITCH: f64 = 0.1;

/// `T² Σ_{k≥0} (−zT)^k / (k+2)!`, the small-`T` expansion of
/// `(zT + e^{−zT} − 1) / z²`.
fn quadratic_kernel_series(z: Complex64, t: f64) -> Complex64 {
    let x = -z * t;
    let mut term = Complex64::new(0.5, 0.0);
    let mut sum = term;
    for k in 1..30 {
        term *= x / (k as f64 + 2.0);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum * t * t
}

/// `e^{w} − 1` for complex `w`, accurate near zero.
fn complex_expm1(w: Complex64) -> Complex64 {
    let half_sin = (0.5 * w.im).sin();
    Complex64::new(
        w.re.exp_m1() * w.im.cos() - 2.0 * half_sin * half_sin,
        w.re.exp() * w.im.sin(),
    )
}

/// `(zT + e^{−zT} − 1) / z²`.
fn quadratic_kernel(z: Complex64, t: f64) -> Complex64 {
    if (z * t).norm() < SERIES_SWITCH {
        return quadratic_kernel_series(z, t);
    }
    (z * t + complex_expm1(-z * t)) / (z * z)
}

fn check_horizon(t: f64, theta: f64) -> Result<()> {
    require_positive("T", t)?;
    require_positive("theta", theta)
}

/// `f₁(T, ω, θ)`:
///
/// ```text
/// T/(θ²+ω²) + [(ω²−θ²)(1 − e^{−θT}cos ωT) − 2θω e^{−θT} sin ωT] / (θ(θ²+ω²)²)
/// ```
pub fn f1(t: f64, omega: f64, theta: f64) -> Result<f64> {
    check_horizon(t, theta)?;
    if !omega.is_finite() {
        return Err(Error::param("omega", omega, "must be finite"));
    }
    let z = Complex64::new(theta, omega);
    if (z * t).norm() < SERIES_SWITCH {
        return Ok(quadratic_kernel_series(z, t).re / theta);
    }
    let d = theta * theta + omega * omega;
    let decay = (-theta * t).exp();
    let (s, c) = (omega * t).sin_cos();
    // 1 − e^{−θT} cos ωT, accurate when θT and ωT are small.
    let one_minus = -(-theta * t).exp_m1() * c + 2.0 * (0.5 * omega * t).sin().powi(2);
    let num = (omega * omega - theta * theta) * one_minus - 2.0 * theta * omega * decay * s;
    Ok(t / d + num / (theta * d * d))
}

/// `f₂(T, ω, θ) = [T(θ − iω) + e^{−T(θ − iω)} − 1] / (θ − iω)²`.
pub fn f2(t: f64, omega: f64, theta: f64) -> Result<Complex64> {
    check_horizon(t, theta)?;
    if !omega.is_finite() {
        return Err(Error::param("omega", omega, "must be finite"));
    }
    Ok(quadratic_kernel(Complex64::new(theta, -omega), t))
}

/// Expected finite-horizon PSD `S^(T)(ω)` for `RedOuDt` or `Mixed`.
pub fn finite_psd_theoretical(model: NoiseModel, t: f64, omega: f64) -> Result<f64> {
    model.validate()?;
    match model {
        NoiseModel::RedOuDt(p) => Ok(f1(t, omega, p.theta)? / t),
        NoiseModel::Mixed(p) => {
            let g = p.gamma;
            let a = f1(t, omega, p.theta)?;
            let b = f2(t, omega, p.theta)?;
            Ok((g * g * a + 2.0 * g * b.re + t) / t)
        }
        other => Err(Error::Unsupported(format!(
            "no finite-horizon closed form for model `{}`",
            other.name()
        ))),
    }
}

/// Finite-horizon spectrum evaluated on a frequency list.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTimeSpec {
    pub horizon: f64,
    pub theta: f64,
    pub gamma: Option<f64>,
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn finite_time_spectrum(model: NoiseModel, t: f64, omegas: &[f64]) -> Result<FiniteTimeSpec> {
    let (theta, gamma) = match model {
        NoiseModel::RedOuDt(p) => (p.theta, None),
        NoiseModel::Mixed(p) => (p.theta, Some(p.gamma)),
        other => {
            return Err(Error::Unsupported(format!(
                "no finite-horizon closed form for model `{}`",
                other.name()
            )))
        }
    };
    let values = omegas
        .iter()
        .map(|w| finite_psd_theoretical(model, t, *w))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteTimeSpec {
        horizon: t,
        theta,
        gamma,
        omegas: omegas.to_vec(),
        values,
    })
}

/// Settings for [`theorem_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremConfig {
    /// OU rate of the drift `α = U`.
    pub theta: f64,
    /// Constant martingale coefficient.
    pub beta: f64,
    pub horizon: f64,
    pub dt: f64,
    /// Frequencies at which the spectrum is reported; the plateau is the
    /// mean over those inside `plateau_band`.
    pub omegas: Vec<f64>,
    pub replicas: usize,
    pub plateau_band: (f64, f64),
    /// Half-width of the averaging window around each ω, relative to ω.
    pub window: f64,
    /// Plateau the run is checked against; `None` means `β²`.
    pub target: Option<f64>,
    pub plateau_tol: f64,
    pub slope_tol: f64,
    pub ratio_tol: f64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            theta: 0.1,
            beta: 1.0,
            horizon: 1e3,
            dt: 1e-2,
            omegas: vec![10.0, 12.5, 15.0, 17.5, 20.0, 22.5, 25.0, 27.5, 30.0],
            replicas: 64,
            plateau_band: (10.0, 30.0),
            window: 0.04,
            target: None,
            plateau_tol: 0.05,
            slope_tol: 0.2,
            ratio_tol: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub omega: f64,
    pub empirical: f64,
    pub theoretical: f64,
    pub plateau_target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    /// Allowed deviation; relative unless `absolute` is set.
    pub tolerance: f64,
    pub absolute: bool,
    pub pass: bool,
}

impl Check {
    pub fn relative(name: &'static str, value: f64, expected: f64, tolerance: f64) -> Self {
        let pass = ((value - expected) / expected).abs() <= tolerance;
        Check { name, value, expected, tolerance, absolute: false, pass }
    }

    pub fn absolute(name: &'static str, value: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (value - expected).abs() <= tolerance;
        Check { name, value, expected, tolerance, absolute: true, pass }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub rows: Vec<ReportRow>,
    pub target: f64,
    pub plateau: f64,
    /// Log-log slope of the empirical spectrum across the plateau band.
    pub decay_slope: f64,
    /// `P(ω_lo) / P(2ω_lo)` with `ω_lo` the lower plateau-band edge.
    pub octave_ratio: f64,
    pub checks: Vec<Check>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Mean of `powers` over bins with `ω ∈ [ω₀(1 − w), ω₀(1 + w)]`.
fn window_mean(omegas: &[f64], powers: &[f64], center: f64, w: f64) -> Result<f64> {
    let (lo, hi) = (center * (1.0 - w), center * (1.0 + w));
    let mut sum = 0.0;
    let mut count = 0usize;
    for (o, p) in omegas.iter().zip(powers) {
        if *o >= lo && *o <= hi {
            sum += p;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientData(format!(
            "no Fourier frequency within ±{w} of ω = {center}; increase the horizon"
        )));
    }
    Ok(sum / count as f64)
}

/// Simulates `dY_k = U_k dt + β ΔW_k` over `replicas` independent paths of
/// length `T`, averages their periodograms and checks the high-frequency
/// behaviour against `β²`.
///
/// Replica `r` draws `U` from substream `2r + 1` and `W` from `2r + 2` of
/// `stream`'s seed, so the result depends only on the seed.
pub fn theorem_experiment(cfg: &TheoremConfig, stream: &GaussianStream) -> Result<TheoremReport> {
    require_positive("theta", cfg.theta)?;
    require_positive("T", cfg.horizon)?;
    require_positive("dt", cfg.dt)?;
    if !cfg.beta.is_finite() {
        return Err(Error::param("beta", cfg.beta, "must be finite"));
    }
    if cfg.replicas == 0 {
        return Err(Error::param("replicas", 0.0, "must be >= 1"));
    }
    if cfg.replicas < 32 {
        log::warn!("{} replicas is below the recommended 32", cfg.replicas);
    }
    let max_omega = cfg.omegas.iter().copied().fold(0.0f64, f64::max);
    let nyquist = std::f64::consts::PI / cfg.dt;
    if cfg.omegas.is_empty() || cfg.omegas.iter().any(|w| w.is_nan() || *w <= 0.0) {
        return Err(Error::InsufficientData("need at least one positive frequency".into()));
    }
    if max_omega * (1.0 + cfg.window) > nyquist {
        return Err(Error::param("omega", max_omega, "above the Nyquist frequency π/dt"));
    }
    if cfg.dt > 2.0 * std::f64::consts::PI / (10.0 * max_omega) {
        return Err(Error::param("dt", cfg.dt, "must satisfy dt <= 2π / (10 max ω)"));
    }

    let n = (cfg.horizon / cfg.dt).round() as usize;
    let horizon = n as f64 * cfg.dt;
    let params = OuParams::stationary(cfg.theta)?;
    let mut sum: Option<Vec<f64>> = None;
    let mut omegas = Vec::new();
    for r in 0..cfg.replicas as u64 {
        let mut u_stream = stream.substream(2 * r + 1);
        let mut w_stream = stream.substream(2 * r + 2);
        let u = ou_exact_sample(params, cfg.dt, n, &mut u_stream)?.values;
        let sd = cfg.dt.sqrt() * cfg.beta;
        let dy: Vec<f64> = u
            .iter()
            .map(|a| a * cfg.dt + sd * w_stream.next_gaussian())
            .collect();
        let p = periodogram_of(&dy, cfg.dt)?;
        match sum.as_mut() {
            None => {
                omegas = p.omegas;
                sum = Some(p.powers);
            }
            Some(acc) => acc.iter_mut().zip(&p.powers).for_each(|(a, v)| *a += v),
        }
    }
    let mut powers = sum.unwrap_or_default();
    powers.iter_mut().for_each(|v| *v /= cfg.replicas as f64);

    let target = cfg.target.unwrap_or(cfg.beta * cfg.beta);
    let red = NoiseModel::RedOuDt(params);
    let mut rows = Vec::with_capacity(cfg.omegas.len());
    for &w in &cfg.omegas {
        rows.push(ReportRow {
            omega: w,
            empirical: window_mean(&omegas, &powers, w, cfg.window)?,
            theoretical: finite_psd_theoretical(red, horizon, w)? + cfg.beta * cfg.beta,
            plateau_target: target,
        });
    }

    let (lo, hi) = cfg.plateau_band;
    let in_band: Vec<&ReportRow> = rows.iter().filter(|r| r.omega >= lo && r.omega <= hi).collect();
    if in_band.len() < 2 {
        return Err(Error::InsufficientData(
            "need at least two report frequencies inside the plateau band".into(),
        ));
    }
    let plateau = in_band.iter().map(|r| r.empirical).sum::<f64>() / in_band.len() as f64;
    let lx: Vec<f64> = in_band.iter().map(|r| r.omega.ln()).collect();
    let ly: Vec<f64> = in_band.iter().map(|r| r.empirical.max(f64::MIN_POSITIVE).ln()).collect();
    let (decay_slope, _) = linear_fit(&lx, &ly);
    let octave_ratio = window_mean(&omegas, &powers, lo, cfg.window)?
        / window_mean(&omegas, &powers, 2.0 * lo, cfg.window)?;

    let checks = if target > 0.0 {
        vec![Check::relative("plateau", plateau, target, cfg.plateau_tol)]
    } else {
        vec![
            Check::absolute("decay_slope", decay_slope, -2.0, cfg.slope_tol),
            Check::relative("octave_ratio", octave_ratio, 4.0, cfg.ratio_tol),
        ]
    };
    Ok(TheoremReport {
        rows,
        target,
        plateau,
        decay_slope,
        octave_ratio,
        checks,
    })
}
