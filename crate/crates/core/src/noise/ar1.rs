use super::{require_count, Ar1Params, InitMode, TimeSeries};
use crate::error::require_unit_open;
use crate::{GaussianStream, Result};

/// Runs `ε_{k+1} = φ ε_k + z_k` from `first`, one output per normal plus
/// the initial value.
pub fn ar1_from_normals(phi: f64, first: f64, normals: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(normals.len() + 1);
    let mut eps = first;
    out.push(eps);
    for z in normals {
        eps = phi * eps + z;
        out.push(eps);
    }
    out
}

/// Unit-spaced AR(1) path of length `n`.
///
/// With [`InitMode::Stationary`] the first normal drawn sets
/// `ε₀ ~ N(0, 1/(1 − φ²))`; the remaining `n − 1` drive the recursion.
pub fn ar1_sample(params: Ar1Params, n: usize, stream: &mut GaussianStream) -> Result<TimeSeries> {
    params.validate()?;
    require_count(n)?;
    let phi = params.phi;
    let first = match params.init {
        InitMode::Stationary => stream.next_gaussian() / (1.0 - phi * phi).sqrt(),
        InitMode::Zero => 0.0,
    };
    let normals = stream.gaussian_fill(n - 1);
    TimeSeries::new(1.0, ar1_from_normals(phi, first, &normals))
}

/// `R_ε(τ) = φ^|τ| / (1 − φ²)`.
pub fn ar1_autocov(phi: f64, tau: i64) -> Result<f64> {
    require_unit_open("phi", phi)?;
    Ok(phi.powf(tau.unsigned_abs() as f64) / (1.0 - phi * phi))
}
