//! The linearly restoring system driven by red noise, in discrete and
//! continuous time.
//!
//! Discrete: `X_{k+1} = ψX_k + σε_k`, `ε_{k+1} = φε_k + z_k`, `ε₀ = 0`.
//!
//! Continuous: `dX = −λX dt + σU dt`, `dU = −θU dt + dW`, `U₀ = 0`, with
//! `λ = −ln ψ` and `θ = −ln φ`. Paths are produced by generating `U` exactly
//! on a fine grid `δt`, Euler-integrating `X` on that grid and keeping every
//! `subsample`-th value.

use crate::error::{require_positive, require_unit_open};
use crate::noise::{ar1_from_normals, IncrementSeries, OuExactStep, TimeSeries};
use crate::{Error, GaussianStream, Result};

/// Above this `λ·δt` the Euler bias can exceed the acceptance tolerances.
pub const EULER_STEP_WARN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteSystemParams {
    pub psi: f64,
    pub phi: f64,
    pub sigma: f64,
    pub x0: f64,
}

impl DiscreteSystemParams {
    pub fn validate(&self) -> Result<()> {
        require_unit_open("psi", self.psi)?;
        require_unit_open("phi", self.phi)?;
        require_positive("sigma", self.sigma)?;
        require_finite("x0", self.x0)
    }

    /// Continuous-time counterpart with `λ = −ln ψ`, `θ = −ln φ`.
    pub fn to_continuous(&self) -> ContinuousSystemParams {
        ContinuousSystemParams {
            lambda: -self.psi.ln(),
            theta: -self.phi.ln(),
            sigma: self.sigma,
            x0: self.x0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousSystemParams {
    pub lambda: f64,
    pub theta: f64,
    pub sigma: f64,
    pub x0: f64,
}

impl ContinuousSystemParams {
    pub fn validate(&self) -> Result<()> {
        require_positive("lambda", self.lambda)?;
        require_positive("theta", self.theta)?;
        require_positive("sigma", self.sigma)?;
        require_finite("x0", self.x0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Fine integration step `δt`.
    pub dt_fine: f64,
    /// Output stride; the output step is `dt_fine · subsample`.
    pub subsample: usize,
    pub n_out: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive("dt_fine", self.dt_fine)?;
        if self.subsample == 0 {
            return Err(Error::param("subsample", 0.0, "must be >= 1"));
        }
        if self.n_out == 0 {
            return Err(Error::InsufficientData("n_out must be >= 1".into()));
        }
        Ok(())
    }

    pub fn dt_out(&self) -> f64 {
        self.dt_fine * self.subsample as f64
    }
}

fn require_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, v, "must be finite"))
    }
}

/// Discrete system driven by an explicit sequence of unit normals.
///
/// `normals[k]` is `z_k`; a path of length `n` uses `n − 2` of them.
pub fn simulate_discrete_from_normals(
    params: DiscreteSystemParams,
    n: usize,
    normals: &[f64],
) -> Result<TimeSeries> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InsufficientData("n must be >= 1".into()));
    }
    let needed = n.saturating_sub(2);
    if normals.len() < needed {
        return Err(Error::InsufficientData(format!(
            "need {needed} normals for a path of length {n}, got {}",
            normals.len()
        )));
    }
    let eps = ar1_from_normals(params.phi, 0.0, &normals[..needed]);
    let mut x = Vec::with_capacity(n);
    let mut cur = params.x0;
    x.push(cur);
    for e in eps.iter().take(n - 1) {
        cur = params.psi * cur + params.sigma * e;
        x.push(cur);
    }
    TimeSeries::new(1.0, x)
}

pub fn simulate_discrete(
    params: DiscreteSystemParams,
    n: usize,
    stream: &mut GaussianStream,
) -> Result<TimeSeries> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InsufficientData("n must be >= 1".into()));
    }
    let normals = stream.gaussian_fill(n.saturating_sub(2));
    simulate_discrete_from_normals(params, n, &normals)
}

/// `X_{k+1} = X_k − λX_k dt + σΔY_k` over the forcing grid.
///
/// Returns `forcing.len() + 1` values starting at `x0`.
pub fn euler_integrate(
    lambda: f64,
    sigma: f64,
    x0: f64,
    forcing: &IncrementSeries,
) -> Result<TimeSeries> {
    if forcing.is_empty() {
        return Err(Error::InsufficientData("forcing is empty".into()));
    }
    require_finite("lambda", lambda)?;
    require_finite("sigma", sigma)?;
    require_finite("x0", x0)?;
    let dt = forcing.dt;
    let mut out = Vec::with_capacity(forcing.len() + 1);
    let mut x = x0;
    out.push(x);
    for dy in &forcing.values {
        x = x - lambda * x * dt + sigma * dy;
        out.push(x);
    }
    TimeSeries::new(dt, out)
}

/// Two-level simulation of the continuous system.
///
/// `U` is stepped exactly at `dt_fine` from `U₀ = 0`, `X` is advanced with
/// the same Euler update as [`euler_integrate`] using the left-endpoint
/// forcing `U_k·δt`, and every `subsample`-th value is emitted. Nothing
/// at the fine resolution is stored, so long runs stay in memory.
pub fn simulate_continuous(
    params: ContinuousSystemParams,
    config: SimConfig,
    stream: &mut GaussianStream,
) -> Result<TimeSeries> {
    params.validate()?;
    config.validate()?;
    if params.lambda * config.dt_fine > EULER_STEP_WARN {
        log::warn!(
            "λ·δt = {} exceeds {EULER_STEP_WARN}; Euler discretisation error may dominate",
            params.lambda * config.dt_fine
        );
    }
    let dt = config.dt_fine;
    let step = OuExactStep::new(params.theta, dt)?;
    let mut out = Vec::with_capacity(config.n_out);
    let mut x = params.x0;
    let mut u = 0.0;
    out.push(x);
    for _ in 1..config.n_out {
        for _ in 0..config.subsample {
            let dy = u * dt;
            x = x - params.lambda * x * dt + params.sigma * dy;
            u = step.advance(u, stream.next_gaussian());
        }
        out.push(x);
    }
    TimeSeries::new(config.dt_out(), out)
}

/// Relative gap below which `λ` and `θ` are treated as equal.
const DEGENERATE_REL: f64 = 1e-8;

/// Asymptotic stationary autocorrelation of the continuous system,
/// `σ²(λe^{−θ|τ|} − θe^{−λ|τ|}) / (λ − θ)`, with the limit
/// `σ²e^{−θ|τ|}(1 + θ|τ|)` when `λ ≈ θ`.
pub fn stationary_autocorr(params: ContinuousSystemParams, tau: f64) -> Result<f64> {
    require_positive("lambda", params.lambda)?;
    require_positive("theta", params.theta)?;
    require_positive("sigma", params.sigma)?;
    let (l, t) = (params.lambda, params.theta);
    let s2 = params.sigma * params.sigma;
    let a = tau.abs();
    if (l - t).abs() < DEGENERATE_REL * l.max(t) {
        let m = 0.5 * (l + t);
        return Ok(s2 * (-m * a).exp() * (1.0 + m * a));
    }
    Ok(s2 * (l * (-t * a).exp() - t * (-l * a).exp()) / (l - t))
}
