//! Spectrum and autocorrelation reproductions behind `fig1` and `fig2`.

use rednoise::noise::{increments, theoretical_psd, MixedParams, OuParams};
use rednoise::sde::{simulate_continuous, simulate_discrete, stationary_autocorr, DiscreteSystemParams, SimConfig};
use rednoise::spectral::{band_average, empirical_acf, loglog_slope, periodogram, AcfMode};
use rednoise::stats::mean;
use rednoise::theorem::Check;
use rednoise::{GaussianStream, NoiseModel, Result, TimeSeries};

pub const FULL_N: usize = 20_000_000;
pub const QUICK_N: usize = 1 << 21;

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Config {
    pub theta: f64,
    pub gamma: f64,
    pub n: usize,
    pub dt: f64,
    pub band_width: usize,
    pub seed: u64,
    /// Allowed relative deviation between band power and closed form.
    pub tol: f64,
    /// Consecutive bands pooled before the deviation is taken.
    pub pool: usize,
    pub slope_band: (f64, f64),
    pub slope_tol: f64,
    pub white_tol: f64,
}

impl Fig1Config {
    pub fn full() -> Self {
        Fig1Config {
            theta: 0.1,
            gamma: 0.5,
            n: FULL_N,
            dt: 0.1,
            band_width: 1000,
            seed: 1,
            tol: 0.10,
            pool: 10,
            slope_band: (1.0, 10.0),
            slope_tol: 0.05,
            white_tol: 0.05,
        }
    }

    pub fn quick() -> Self {
        Fig1Config { n: QUICK_N, tol: 0.15, ..Self::full() }
    }
}

/// One panel: band-averaged periodogram next to the band-averaged closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Curve {
    pub name: &'static str,
    pub model: NoiseModel,
    pub omegas: Vec<f64>,
    pub empirical: Vec<f64>,
    pub theoretical: Vec<f64>,
    /// Bands from the 4th up to half the Nyquist frequency.
    pub compared: std::ops::Range<usize>,
    pub max_band_dev: f64,
    pub max_pooled_dev: f64,
    /// Centre frequency of the pooled group with the largest deviation.
    pub worst_omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Result {
    pub curves: Vec<Fig1Curve>,
    pub red_slope: f64,
    pub white_level: f64,
    pub checks: Vec<Check>,
}

fn rel_dev(emp: f64, theory: f64) -> f64 {
    (emp / theory - 1.0).abs()
}

fn fig1_curve(name: &'static str, model: NoiseModel, cfg: &Fig1Config, stream: &mut GaussianStream) -> Result<Fig1Curve> {
    let incr = increments(model, cfg.dt, cfg.n, stream)?;
    let p = periodogram(&incr)?;
    let avg = band_average(&p, cfg.band_width)?;
    // The closed form is averaged over the same bins as the estimate.
    let theoretical = p
        .omegas
        .chunks_exact(cfg.band_width)
        .map(|ws| {
            let vals = ws.iter().map(|w| theoretical_psd(model, *w)).collect::<Result<Vec<_>>>()?;
            Ok(mean(&vals))
        })
        .collect::<Result<Vec<_>>>()?;
    let half_nyquist = 0.5 * p.nyquist();
    let end = avg.omegas.iter().take_while(|w| **w <= half_nyquist).count();
    let compared = 3.min(end)..end;
    let mut max_band_dev = 0.0f64;
    for b in compared.clone() {
        max_band_dev = max_band_dev.max(rel_dev(avg.powers[b], theoretical[b]));
    }
    let mut max_pooled_dev = 0.0f64;
    let mut worst_omega = f64::NAN;
    for start in compared.clone().step_by(cfg.pool) {
        let stop = (start + cfg.pool).min(end);
        let emp = mean(&avg.powers[start..stop]);
        let theory = mean(&theoretical[start..stop]);
        let d = rel_dev(emp, theory);
        if d > max_pooled_dev {
            max_pooled_dev = d;
            worst_omega = mean(&avg.omegas[start..stop]);
        }
    }
    Ok(Fig1Curve {
        name,
        model,
        omegas: avg.omegas,
        empirical: avg.powers,
        theoretical,
        compared,
        max_band_dev,
        max_pooled_dev,
        worst_omega,
    })
}

/// Band-averaged periodograms of `dW`, `U dt`, `dU` and `γU dt + dW` against
/// their closed-form PSDs. Each panel draws from its own substream.
pub fn run_fig1(cfg: &Fig1Config) -> Result<Fig1Result> {
    let ou = OuParams::stationary(cfg.theta)?;
    let models: [(&'static str, NoiseModel); 4] = [
        ("white", NoiseModel::White),
        ("red", NoiseModel::RedOuDt(ou)),
        ("du", NoiseModel::DiffU(ou)),
        ("mixed", NoiseModel::Mixed(MixedParams::new(cfg.theta, cfg.gamma)?)),
    ];
    let root = GaussianStream::new(cfg.seed);
    let mut curves = Vec::with_capacity(models.len());
    for (i, (name, model)) in models.into_iter().enumerate() {
        curves.push(fig1_curve(name, model, cfg, &mut root.substream(i as u64 + 1))?);
    }

    let red = &curves[1];
    let red_avg = rednoise::spectral::AvgSpectrum {
        omegas: red.omegas.clone(),
        powers: red.empirical.clone(),
        band_width: cfg.band_width,
    };
    let (red_slope, _) = loglog_slope(&red_avg, cfg.slope_band.0, cfg.slope_band.1)?;
    let white = &curves[0];
    let white_level = mean(&white.empirical[white.compared.clone()]);

    const DEV_NAMES: [&str; 4] = ["white_max_dev", "red_max_dev", "du_max_dev", "mixed_max_dev"];
    let mut checks: Vec<Check> = curves
        .iter()
        .zip(DEV_NAMES)
        .map(|(c, name)| Check::absolute(name, c.max_pooled_dev, 0.0, cfg.tol))
        .collect();
    checks.push(Check::absolute("red_slope", red_slope, -2.0, cfg.slope_tol));
    checks.push(Check::relative("white_level", white_level, 1.0, cfg.white_tol));
    Ok(Fig1Result { curves, red_slope, white_level, checks })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Config {
    pub system: DiscreteSystemParams,
    pub dt_fine: f64,
    pub subsample: usize,
    pub n: usize,
    pub max_lag: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Fig2Config {
    pub fn full() -> Self {
        Fig2Config {
            system: DiscreteSystemParams { psi: 0.8, phi: 0.9, sigma: 1.0, x0: 0.0 },
            dt_fine: 0.1,
            subsample: 10,
            n: FULL_N,
            max_lag: 20,
            seed: 1,
            tol: 0.01,
        }
    }

    pub fn quick() -> Self {
        Fig2Config { n: 2_000_000, tol: 0.03, ..Self::full() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Result {
    pub lambda: f64,
    pub theta: f64,
    /// Output samples dropped from the start of each path.
    pub burn_in: usize,
    pub lags: Vec<usize>,
    pub discrete: Vec<f64>,
    pub continuous: Vec<f64>,
    pub theoretical: Vec<f64>,
    pub discrete_max_dev: f64,
    pub continuous_max_dev: f64,
    pub checks: Vec<Check>,
}

fn acf_after_burn_in(values: Vec<f64>, dt: f64, burn_in: usize, max_lag: usize) -> Result<Vec<f64>> {
    let s = TimeSeries::new(dt, values[burn_in..].to_vec())?;
    Ok(empirical_acf(&s, max_lag, AcfMode::Correlation)?.values)
}

/// Normalised autocorrelations of the discrete system and of the Euler
/// integrated continuous system, each on its own substream, against the
/// stationary closed form. Paths are extended by a burn-in of
/// `max(10/λ, 10/θ)` time units that is discarded before estimation.
pub fn run_fig2(cfg: &Fig2Config) -> Result<Fig2Result> {
    cfg.system.validate()?;
    let cont = cfg.system.to_continuous();
    let dt_out = cfg.dt_fine * cfg.subsample as f64;
    if (dt_out - 1.0).abs() > 1e-12 {
        log::warn!("output spacing {dt_out} differs from the unit step of the discrete system");
    }
    let burn_time = (10.0 / cont.lambda).max(10.0 / cont.theta);
    let burn_in = (burn_time / dt_out).ceil() as usize;
    let root = GaussianStream::new(cfg.seed);

    let xd = simulate_discrete(cfg.system, cfg.n + burn_in, &mut root.substream(1))?;
    let discrete = acf_after_burn_in(xd.values, 1.0, burn_in, cfg.max_lag)?;

    let sim = SimConfig { dt_fine: cfg.dt_fine, subsample: cfg.subsample, n_out: cfg.n + burn_in };
    let xc = simulate_continuous(cont, sim, &mut root.substream(2))?;
    let continuous = acf_after_burn_in(xc.values, dt_out, burn_in, cfg.max_lag)?;

    let r0 = stationary_autocorr(cont, 0.0)?;
    let theoretical = (0..=cfg.max_lag)
        .map(|m| Ok(stationary_autocorr(cont, m as f64 * dt_out)? / r0))
        .collect::<Result<Vec<_>>>()?;
    let max_dev = |emp: &[f64]| emp.iter().zip(&theoretical).map(|(e, t)| rel_dev(*e, *t)).fold(0.0, f64::max);
    let discrete_max_dev = max_dev(&discrete);
    let continuous_max_dev = max_dev(&continuous);
    let checks = vec![
        Check::absolute("discrete_max_dev", discrete_max_dev, 0.0, cfg.tol),
        Check::absolute("continuous_max_dev", continuous_max_dev, 0.0, cfg.tol),
    ];
    Ok(Fig2Result {
        lambda: cont.lambda,
        theta: cont.theta,
        burn_in,
        lags: (0..=cfg.max_lag).collect(),
        discrete,
        continuous,
        theoretical,
        discrete_max_dev,
        continuous_max_dev,
        checks,
    })
}
