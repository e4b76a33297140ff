use super::{require_count, InitMode, OuParams, TimeSeries};
use crate::error::require_positive;
use crate::{Error, GaussianStream, Result};

/// One step of the exact OU transition on a grid of width `dt`:
/// `q_{k+1} = e^{−θ dt} q_k + sqrt((1 − e^{−2θ dt}) / (2θ)) z_k`.
///
/// The resulting sequence has the same finite-dimensional laws as
/// `(U_{k dt})` for the continuous process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuExactStep {
    pub decay: f64,
    pub noise_scale: f64,
}

impl OuExactStep {
    pub fn new(theta: f64, dt: f64) -> Result<Self> {
        require_positive("theta", theta)?;
        require_positive("dt", dt)?;
        let decay = (-theta * dt).exp();
        // 1 − e^{−2θdt} without cancellation for small θdt.
        let one_minus = -(-2.0 * theta * dt).exp_m1();
        Ok(OuExactStep {
            decay,
            noise_scale: (one_minus / (2.0 * theta)).sqrt(),
        })
    }

    #[inline]
    pub fn advance(&self, q: f64, z: f64) -> f64 {
        self.decay * q + self.noise_scale * z
    }
}

/// Draws `U₀` according to `init`.
pub(crate) fn ou_initial(theta: f64, init: InitMode, stream: &mut GaussianStream) -> f64 {
    match init {
        InitMode::Stationary => stream.next_gaussian() / (2.0 * theta).sqrt(),
        InitMode::Zero => 0.0,
    }
}

/// Exact OU path `(U_0, U_dt, …, U_{(n−1)dt})`.
pub fn ou_exact_sample(
    params: OuParams,
    dt: f64,
    n: usize,
    stream: &mut GaussianStream,
) -> Result<TimeSeries> {
    params.validate()?;
    require_count(n)?;
    let step = OuExactStep::new(params.theta, dt)?;
    let mut values = Vec::with_capacity(n);
    let mut q = ou_initial(params.theta, params.init, stream);
    values.push(q);
    for _ in 1..n {
        q = step.advance(q, stream.next_gaussian());
        values.push(q);
    }
    TimeSeries::new(dt, values)
}

/// `R_U(τ) = e^{−θ|τ|} / (2θ)`.
pub fn ou_autocov(theta: f64, tau: f64) -> Result<f64> {
    require_positive("theta", theta)?;
    Ok((-theta * tau.abs()).exp() / (2.0 * theta))
}

/// `Cov(U_dt − U_0, U_{τ+dt} − U_τ) = e^{−θτ}(1 − cosh θdt)/θ` for `τ ≥ dt`.
///
/// Evaluated as `−2 e^{−θτ} sinh²(θdt/2) / θ`, which has no cancellation.
pub fn ou_increment_cov(theta: f64, dt: f64, tau: f64) -> Result<f64> {
    require_positive("theta", theta)?;
    require_positive("dt", dt)?;
    if tau.is_nan() || tau < dt {
        return Err(Error::param("tau", tau, "must satisfy tau >= dt"));
    }
    let s = (0.5 * theta * dt).sinh();
    Ok(-2.0 * (-theta * tau).exp() * s * s / theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{linear_fit, variance};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn coefficients_match_closed_form() {
        let s = OuExactStep::new(0.1, 0.1).unwrap();
        assert_relative_eq!(s.decay, 0.990_049_833_749_168, max_relative = 1e-14);
        assert_relative_eq!(s.noise_scale, 0.314_653_195_544, max_relative = 1e-11);
        let var = s.noise_scale * s.noise_scale;
        assert_relative_eq!(var, (1.0 - (-0.02f64).exp()) / 0.2, max_relative = 1e-12);
    }

    #[test]
    fn zero_init_single_sample() {
        let p = OuParams::new(0.1, InitMode::Zero).unwrap();
        let s = ou_exact_sample(p, 0.1, 1, &mut GaussianStream::new(0)).unwrap();
        assert_eq!(s.values, vec![0.0]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut s = GaussianStream::new(0);
        let p = OuParams { theta: 0.0, init: InitMode::Zero };
        assert!(ou_exact_sample(p, 0.1, 5, &mut s).is_err());
        let p = OuParams::stationary(0.1).unwrap();
        assert!(ou_exact_sample(p, 0.0, 5, &mut s).is_err());
        assert!(ou_exact_sample(p, -1.0, 5, &mut s).is_err());
        assert!(ou_exact_sample(p, 0.1, 0, &mut s).is_err());
        assert!(ou_autocov(-0.1, 0.0).is_err());
        assert!(ou_increment_cov(0.1, 0.1, 0.05).is_err());
    }

    #[test]
    fn autocov_values() {
        assert_relative_eq!(ou_autocov(0.1, 0.0).unwrap(), 5.0, max_relative = 1e-15);
        assert_relative_eq!(ou_autocov(0.1, 10.0).unwrap(), 1.839_397, max_relative = 1e-6);
        assert_eq!(ou_autocov(0.1, -10.0).unwrap(), ou_autocov(0.1, 10.0).unwrap());
    }

    #[test]
    fn increment_cov_value_and_decay() {
        let direct = 10.0 * (-0.1f64).exp() * (1.0 - 0.01f64.cosh());
        let v = ou_increment_cov(0.1, 0.1, 1.0).unwrap();
        assert_relative_eq!(v, direct, max_relative = 1e-8);
        assert_relative_eq!(v, -4.5242e-4, max_relative = 1e-4);
        let far = ou_increment_cov(0.1, 0.1, 2e3).unwrap();
        assert!(far < 0.0 && far > -1e-88);
    }

    #[test]
    fn increment_cov_is_accurate_for_tiny_steps() {
        // cosh(x) − 1 = x²/2 + x⁴/24 + … ; direct evaluation would lose all digits here.
        let (theta, dt, tau) = (1e-3, 1e-6, 1.0);
        let x: f64 = theta * dt;
        let expected = -(-theta * tau).exp() * (x * x / 2.0 + x.powi(4) / 24.0) / theta;
        assert_relative_eq!(ou_increment_cov(theta, dt, tau).unwrap(), expected, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn increment_cov_is_negative(theta in 1e-3f64..10.0, dt in 1e-4f64..1.0, extra in 0.0f64..50.0) {
            let v = ou_increment_cov(theta, dt, dt + extra).unwrap();
            prop_assert!(v < 0.0);
        }

        #[test]
        fn transition_moments(theta in 1e-3f64..10.0, dt in 1e-4f64..2.0) {
            let s = OuExactStep::new(theta, dt).unwrap();
            prop_assert!((s.decay - (-theta * dt).exp()).abs() <= 1e-15);
            let var = (1.0 - (-2.0 * theta * dt).exp()) / (2.0 * theta);
            prop_assert!((s.noise_scale.powi(2) / var - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn stationary_variance_and_regression() {
        let p = OuParams::stationary(0.1).unwrap();
        let q = ou_exact_sample(p, 0.1, 2_000_000, &mut GaussianStream::new(42)).unwrap().values;
        let var = variance(&q);
        assert!((var / 5.0 - 1.0).abs() < 0.02, "var {var}");
        let (slope, icpt) = linear_fit(&q[..q.len() - 1], &q[1..]);
        assert!((slope - (-0.01f64).exp()).abs() < 1e-3, "slope {slope}");
        let resid: Vec<f64> = q.windows(2).map(|w| w[1] - slope * w[0] - icpt).collect();
        let sd = variance(&resid).sqrt();
        assert!((sd / 0.314_655 - 1.0).abs() < 0.01, "sd {sd}");
    }

    #[test]
    fn stationary_autocovariance_matches_oracle() {
        let (theta, dt, n) = (0.1, 0.1, 20_000_000usize);
        let p = OuParams::stationary(theta).unwrap();
        let q = ou_exact_sample(p, dt, n, &mut GaussianStream::new(9)).unwrap().values;
        let m = crate::stats::mean(&q);
        let horizon = n as f64 * dt;
        for lag in [0usize, 10, 50, 100, 200, 300] {
            let tau = lag as f64 * dt;
            let c = (0..n - lag).map(|k| (q[k] - m) * (q[k + lag] - m)).sum::<f64>() / n as f64;
            let oracle = ou_autocov(theta, tau).unwrap();
            // Bartlett standard error of the lag-τ estimate relative to R_U(τ).
            let x = theta * tau;
            let rel_sd = ((1.0 + (1.0 + 2.0 * x) * (-2.0 * x).exp()) / (horizon * theta)).sqrt() / (-x).exp();
            let tol = f64::max(0.03, 4.0 * rel_sd);
            assert!((c / oracle - 1.0).abs() < tol, "lag {lag}: {c} vs {oracle} (tol {tol})");
        }
    }
}
