use super::ar1::ar1_sample;
use super::fgn::fgn_sample;
use super::ou::{ou_autocov, ou_exact_sample, ou_increment_cov, ou_initial};
use super::{ar1_autocov, require_count, IncrementSeries, InitMode, NoiseModel};
use crate::error::require_positive;
use crate::{Error, GaussianStream, Result};

/// Draws `n` increments `ΔY_k` of `model` on a grid of step `dt`.
///
/// - `White`: `√dt · z_k`.
/// - `RedOuDt`: `U_{k dt} · dt`, left-endpoint rule on the exact OU path.
/// - `DiffU`: `U_{(k+1)dt} − U_{k dt}` from the exact OU path.
/// - `Mixed`: Euler scheme on one Brownian stream, `ΔW_k = √dt z_k`,
///   `ΔY_k = γU_k dt + ΔW_k`, `U_{k+1} = U_k − θU_k dt + ΔW_k`, with
///   `U_0 ~ N(0, 1/(2θ))`. Sharing `ΔW` between `U` and `Y` is what produces
///   the cross-spectral term.
/// - `Ar1Driven`: `ε_k · dt`, defined on the unit grid only.
/// - `Fgn`: circulant-embedding fGn.
pub fn increments(
    model: NoiseModel,
    dt: f64,
    n: usize,
    stream: &mut GaussianStream,
) -> Result<IncrementSeries> {
    model.validate()?;
    require_positive("dt", dt)?;
    require_count(n)?;
    let values = match model {
        NoiseModel::White => {
            let sd = dt.sqrt();
            let mut v = stream.gaussian_fill(n);
            v.iter_mut().for_each(|x| *x *= sd);
            v
        }
        NoiseModel::RedOuDt(p) => {
            let mut u = ou_exact_sample(p, dt, n, stream)?.values;
            u.iter_mut().for_each(|x| *x *= dt);
            u
        }
        NoiseModel::DiffU(p) => {
            let u = ou_exact_sample(p, dt, n + 1, stream)?.values;
            u.windows(2).map(|w| w[1] - w[0]).collect()
        }
        NoiseModel::Mixed(p) => {
            if p.theta * dt > 0.01 * (1.0 + 1e-9) {
                log::warn!(
                    "mixed model Euler step θ·dt = {} exceeds 0.01; expect visible discretisation bias",
                    p.theta * dt
                );
            }
            let sd = dt.sqrt();
            let mut u = ou_initial(p.theta, InitMode::Stationary, stream);
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                let dw = sd * stream.next_gaussian();
                out.push(p.gamma * u * dt + dw);
                u += -p.theta * u * dt + dw;
            }
            out
        }
        NoiseModel::Ar1Driven(p) => {
            if dt != 1.0 {
                return Err(Error::Unsupported(format!(
                    "AR(1)-driven noise is only defined on the unit grid (dt = 1), got dt = {dt}"
                )));
            }
            ar1_sample(p, n, stream)?.values
        }
        NoiseModel::Fgn(p) => return fgn_sample(p, dt, n, stream),
    };
    IncrementSeries::new(dt, values, model)
}

/// Closed-form power spectral density at angular frequency `omega`.
///
/// For `Fgn` only the shape `|ω|^{1−2H}` is returned; the amplitude is left
/// to a least-squares fit.
pub fn theoretical_psd(model: NoiseModel, omega: f64) -> Result<f64> {
    model.validate()?;
    if !omega.is_finite() {
        return Err(Error::param("omega", omega, "must be finite"));
    }
    let w2 = omega * omega;
    Ok(match model {
        NoiseModel::White => 1.0,
        NoiseModel::RedOuDt(p) => 1.0 / (p.theta * p.theta + w2),
        NoiseModel::DiffU(p) => w2 / (p.theta * p.theta + w2),
        NoiseModel::Mixed(p) => {
            let g = p.gamma + p.theta;
            (g * g + w2) / (p.theta * p.theta + w2)
        }
        NoiseModel::Ar1Driven(p) => {
            let l = p.phi.ln();
            -2.0 * l / ((1.0 - p.phi * p.phi) * (l * l + w2))
        }
        NoiseModel::Fgn(p) => {
            if omega == 0.0 {
                return Err(Error::param("omega", omega, "fGn spectrum is singular at zero"));
            }
            omega.abs().powf(1.0 - 2.0 * p.hurst)
        }
    })
}

/// Closed-form autocovariance of the process behind `model` at lag `tau`.
///
/// - `Ar1Driven`: `R_ε(τ)`; `tau` must be an integer.
/// - `RedOuDt`: `R_U(τ)` of the OU process `U`.
/// - `DiffU`: covariance of two `dt`-increments of `U` a time `tau ≥ dt` apart.
///
/// `dt` is only used by `DiffU`.
pub fn theoretical_acf(model: NoiseModel, dt: f64, tau: f64) -> Result<f64> {
    model.validate()?;
    match model {
        NoiseModel::Ar1Driven(p) => {
            if tau.fract() != 0.0 || !tau.is_finite() {
                return Err(Error::param("tau", tau, "AR(1) lag must be an integer"));
            }
            ar1_autocov(p.phi, tau as i64)
        }
        NoiseModel::RedOuDt(p) => ou_autocov(p.theta, tau),
        NoiseModel::DiffU(p) => ou_increment_cov(p.theta, dt, tau),
        other => Err(Error::Unsupported(format!(
            "no closed-form autocovariance for model `{}`",
            other.name()
        ))),
    }
}
