//! Command-line front end: argument types, command runners and the
//! reproduction harnesses they share with the test suite.

pub mod figures;
pub mod output;
pub mod source;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rednoise::spectral::{band_average, empirical_acf, loglog_slope, periodogram_of, AcfMode};
use rednoise::stats::{mean, variance};
use rednoise::theorem::{theorem_experiment, Check, TheoremConfig};
use rednoise::{GaussianStream, TimeSeries};

use figures::{run_fig1, run_fig2, Fig1Config, Fig2Config};
use output::{c_exp, write_to, Column, Format};
use source::{generate, read_series, ModelSpec, Series};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rednoise::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// Stable identifier for the failure class.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(rednoise::Error::InvalidParameter { .. }) => "invalid_parameter",
            CliError::Core(rednoise::Error::InsufficientData(_)) => "insufficient_data",
            CliError::Core(rednoise::Error::Unsupported(_)) => "unsupported",
            CliError::Core(rednoise::Error::Parse(_)) => "parse",
            CliError::Core(rednoise::Error::Numerical(_)) => "numerical",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }

    /// `error kind=<kind> message="<text>"` on a single line.
    pub fn report_line(&self) -> String {
        let msg = self.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
        format!("error kind={} message=\"{msg}\"", self.kind())
    }
}

#[derive(Debug, Parser)]
#[command(name = "rednoise", version, about = "Red-noise generation, spectra and reproduction runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded increment series or system path.
    Generate(GenerateArgs),
    /// Band-averaged periodogram of a generated or stored series.
    Psd(PsdArgs),
    /// Empirical autocorrelation of a generated or stored series.
    Acf(AcfArgs),
    /// Log-log spectral slope over a frequency range.
    Slope(SlopeArgs),
    /// Four-panel spectrum comparison for dW, U dt, dU and γU dt + dW.
    Fig1(Fig1Args),
    /// Autocorrelation of the discrete and continuous systems.
    Fig2(Fig2Args),
    /// High-frequency plateau experiment for dY = U dt + β dW.
    Theorem(TheoremArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Model string, e.g. "model=red theta=0.1" or
    /// "model=continuous lambda=0.22 theta=0.11 subsample=10".
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub n: usize,
    /// Grid step; the Euler step for the continuous system.
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Either a model to generate from or a stored series.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    pub model: Option<String>,
    #[arg(long, required_unless_present = "input")]
    pub n: Option<usize>,
    /// Grid step of the generated series, or of raw input.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Series previously written by `generate`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub input_format: Format,
}

impl SourceArgs {
    pub fn load(&self) -> Result<Series, CliError> {
        match (&self.input, &self.model, self.n) {
            (Some(path), _, _) => read_series(path, self.input_format, self.dt),
            (None, Some(model), Some(n)) => generate(model.parse()?, n, self.dt.unwrap_or(1.0), self.seed),
            _ => Err(CliError::Usage("either --input or both --model and --n are required".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PsdArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1)]
    pub band_width: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct AcfArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    /// `correlation` or `covariance`.
    #[arg(long, default_value_t = AcfMode::Correlation)]
    pub mode: AcfMode,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SlopeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1000)]
    pub band_width: usize,
    #[arg(long)]
    pub omega_min: f64,
    #[arg(long)]
    pub omega_max: f64,
    /// Expected slope; turns the run into a check.
    #[arg(long, allow_negative_numbers = true)]
    pub expect: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Fig1Args {
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    pub gamma: f64,
    /// Samples per series; 2·10⁷, or 2²¹ with --quick.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 1000)]
    pub band_width: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory for white.csv, red.csv, du.csv and mixed.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Desk-scale run with a 15% tolerance.
    #[arg(long)]
    pub quick: bool,
    /// Relative tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 0.8)]
    pub psi: f64,
    #[arg(long, default_value_t = 0.9)]
    pub phi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Euler step of the continuous system.
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 10)]
    pub subsample: usize,
    /// Samples per path; 2·10⁷, or 2·10⁶ with --quick.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory for discrete.csv, continuous.csv and theory.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Desk-scale run with a 3% tolerance.
    #[arg(long)]
    pub quick: bool,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TheoremArgs {
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub beta: f64,
    /// Horizon T of each replica.
    #[arg(long, default_value_t = 1000.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 64)]
    pub replicas: usize,
    /// Comma-separated report frequencies.
    #[arg(long, value_delimiter = ',')]
    pub omegas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Plateau to check against instead of β².
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// What a finished command reports back to `main`.
#[derive(Debug, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One line per check followed by the overall status line.
    pub fn check_lines(&self) -> Vec<String> {
        if self.checks.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<String> = self.checks.iter().map(check_line).collect();
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        out.push(if failed.is_empty() {
            "status=PASS".to_string()
        } else {
            format!("status=FAIL reason=\"check failed: {}\"", failed.join(","))
        });
        out
    }
}

pub fn check_line(c: &Check) -> String {
    format!(
        "check name={} value={} expected={} tol={}{} status={}",
        c.name,
        c.value,
        c.expected,
        c.tolerance,
        if c.absolute { "" } else { " relative=true" },
        if c.pass { "PASS" } else { "FAIL" }
    )
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Psd(a) => cmd_psd(&a),
        Command::Acf(a) => cmd_acf(&a),
        Command::Slope(a) => cmd_slope(&a),
        Command::Fig1(a) => cmd_fig1(&a),
        Command::Fig2(a) => cmd_fig2(&a),
        Command::Theorem(a) => cmd_theorem(&a),
    }
}

fn require_n(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(rednoise::Error::param("n", 0.0, "must be >= 1").into());
    }
    Ok(())
}

fn require_dt(dt: f64) -> Result<(), CliError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(rednoise::Error::param("dt", dt, "must be positive and finite").into());
    }
    Ok(())
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<Outcome, CliError> {
    let spec: ModelSpec = a.model.parse()?;
    require_n(a.n)?;
    require_dt(a.dt)?;
    let series = generate(spec, a.n, a.dt, a.seed)?;
    // Raw output carries the values alone; the time axis is implied by dt.
    match a.format {
        Format::Csv => {
            let times = series.times();
            write_to(
                a.out.as_deref(),
                a.format,
                &["t", "value"],
                &[Column::Float(&times), Column::Float(&series.values)],
            )?;
        }
        Format::F64le => write_to(a.out.as_deref(), a.format, &["value"], &[Column::Float(&series.values)])?,
    }
    Ok(Outcome {
        lines: vec![format!(
            "n={} dt={} mean={} variance={}",
            series.values.len(),
            series.dt,
            c_exp(mean(&series.values)),
            c_exp(variance(&series.values))
        )],
        checks: Vec::new(),
    })
}

fn validate_source(s: &SourceArgs) -> Result<(), CliError> {
    if let Some(n) = s.n {
        require_n(n)?;
    }
    if let Some(dt) = s.dt {
        require_dt(dt)?;
    }
    Ok(())
}

pub fn cmd_psd(a: &PsdArgs) -> Result<Outcome, CliError> {
    validate_source(&a.source)?;
    let series = a.source.load()?;
    let p = periodogram_of(&series.values, series.dt)?;
    let avg = band_average(&p, a.band_width)?;
    write_to(
        a.out.as_deref(),
        a.format,
        &["omega", "power"],
        &[Column::Float(&avg.omegas), Column::Float(&avg.powers)],
    )?;
    Ok(Outcome {
        lines: vec![format!("bands={} band_width={} nyquist={}", avg.omegas.len(), a.band_width, c_exp(p.nyquist()))],
        checks: Vec::new(),
    })
}

pub fn cmd_acf(a: &AcfArgs) -> Result<Outcome, CliError> {
    validate_source(&a.source)?;
    let series = a.source.load()?;
    let ts = TimeSeries::new(series.dt, series.values)?;
    let acf = empirical_acf(&ts, a.max_lag, a.mode)?;
    write_to(
        a.out.as_deref(),
        a.format,
        &["lag", "value"],
        &[Column::Int(&acf.lags), Column::Float(&acf.values)],
    )?;
    Ok(Outcome {
        lines: vec![format!("lags={} mode={} dt={}", acf.lags.len(), acf.mode, series.dt)],
        checks: Vec::new(),
    })
}

pub fn cmd_slope(a: &SlopeArgs) -> Result<Outcome, CliError> {
    validate_source(&a.source)?;
    if !(a.omega_min > 0.0 && a.omega_max > a.omega_min) {
        return Err(CliError::Usage("need 0 < omega-min < omega-max".into()));
    }
    let series = a.source.load()?;
    let p = periodogram_of(&series.values, series.dt)?;
    let avg = band_average(&p, a.band_width)?;
    let (slope, intercept) = loglog_slope(&avg, a.omega_min, a.omega_max)?;
    let checks = a
        .expect
        .map(|e| vec![Check::absolute("slope", slope, e, a.tol)])
        .unwrap_or_default();
    Ok(Outcome {
        lines: vec![format!("slope={} intercept={}", c_exp(slope), c_exp(intercept))],
        checks,
    })
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn file_name(stem: &str, format: Format) -> String {
    match format {
        Format::Csv => format!("{stem}.csv"),
        Format::F64le => format!("{stem}.f64le"),
    }
}

pub fn fig1_config(a: &Fig1Args) -> Fig1Config {
    let base = if a.quick { Fig1Config::quick() } else { Fig1Config::full() };
    Fig1Config {
        theta: a.theta,
        gamma: a.gamma,
        n: a.n.unwrap_or(base.n),
        dt: a.dt,
        band_width: a.band_width,
        seed: a.seed,
        tol: a.tol.unwrap_or(base.tol),
        ..base
    }
}

pub fn cmd_fig1(a: &Fig1Args) -> Result<Outcome, CliError> {
    let cfg = fig1_config(a);
    require_n(cfg.n)?;
    require_dt(cfg.dt)?;
    create_dir(&a.out)?;
    let res = run_fig1(&cfg)?;
    let mut lines = Vec::new();
    for c in &res.curves {
        let path = a.out.join(file_name(c.name, a.format));
        write_to(
            Some(&path),
            a.format,
            &["omega", "empirical", "theoretical"],
            &[Column::Float(&c.omegas), Column::Float(&c.empirical), Column::Float(&c.theoretical)],
        )?;
        lines.push(format!(
            "panel={} bands={} compared={} max_pooled_dev={} worst_omega={} max_band_dev={}",
            c.name,
            c.omegas.len(),
            c.compared.len(),
            c_exp(c.max_pooled_dev),
            c_exp(c.worst_omega),
            c_exp(c.max_band_dev)
        ));
    }
    lines.push(format!("red_slope={} white_level={}", c_exp(res.red_slope), c_exp(res.white_level)));
    Ok(Outcome { lines, checks: res.checks })
}

pub fn fig2_config(a: &Fig2Args) -> Fig2Config {
    let base = if a.quick { Fig2Config::quick() } else { Fig2Config::full() };
    Fig2Config {
        system: rednoise::sde::DiscreteSystemParams { psi: a.psi, phi: a.phi, sigma: a.sigma, x0: 0.0 },
        dt_fine: a.dt,
        subsample: a.subsample,
        n: a.n.unwrap_or(base.n),
        max_lag: a.max_lag,
        seed: a.seed,
        tol: a.tol.unwrap_or(base.tol),
    }
}

pub fn cmd_fig2(a: &Fig2Args) -> Result<Outcome, CliError> {
    let cfg = fig2_config(a);
    require_n(cfg.n)?;
    require_dt(cfg.dt_fine)?;
    if cfg.subsample == 0 {
        return Err(rednoise::Error::param("subsample", 0.0, "must be >= 1").into());
    }
    create_dir(&a.out)?;
    let res = run_fig2(&cfg)?;
    for (stem, values) in [("discrete", &res.discrete), ("continuous", &res.continuous), ("theory", &res.theoretical)] {
        write_to(
            Some(&a.out.join(file_name(stem, a.format))),
            a.format,
            &["lag", "value"],
            &[Column::Int(&res.lags), Column::Float(values)],
        )?;
    }
    let lines = vec![
        format!("lambda={:.6} theta={:.6} burn_in={}", res.lambda, res.theta, res.burn_in),
        format!(
            "discrete_max_dev={} continuous_max_dev={}",
            c_exp(res.discrete_max_dev),
            c_exp(res.continuous_max_dev)
        ),
    ];
    Ok(Outcome { lines, checks: res.checks })
}

pub fn cmd_theorem(a: &TheoremArgs) -> Result<Outcome, CliError> {
    let defaults = TheoremConfig::default();
    let cfg = TheoremConfig {
        theta: a.theta,
        beta: a.beta,
        horizon: a.horizon,
        dt: a.dt,
        omegas: a.omegas.clone().unwrap_or(defaults.omegas.clone()),
        replicas: a.replicas,
        target: a.target,
        ..defaults
    };
    let report = theorem_experiment(&cfg, &GaussianStream::new(a.seed))?;
    let col = |f: fn(&rednoise::theorem::ReportRow) -> f64| report.rows.iter().map(f).collect::<Vec<_>>();
    let (w, e, t, p) = (col(|r| r.omega), col(|r| r.empirical), col(|r| r.theoretical), col(|r| r.plateau_target));
    write_to(
        a.out.as_deref(),
        a.format,
        &["omega", "empirical", "theoretical", "plateau_target"],
        &[Column::Float(&w), Column::Float(&e), Column::Float(&t), Column::Float(&p)],
    )?;
    Ok(Outcome {
        lines: vec![format!(
            "beta={} target={} plateau={} decay_slope={} octave_ratio={}",
            a.beta,
            report.target,
            c_exp(report.plateau),
            c_exp(report.decay_slope),
            c_exp(report.octave_ratio)
        )],
        checks: report.checks,
    })
}
