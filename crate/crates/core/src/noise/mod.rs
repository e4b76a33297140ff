//! Noise differentials: samplers and closed-form oracles.
//!
//! Six families are covered, all driven by a [`GaussianStream`]:
//!
//! | variant        | differential       | PSD                                   |
//! |----------------|--------------------|---------------------------------------|
//! | `White`        | `dW`               | `1`                                   |
//! | `RedOuDt`      | `U dt`             | `1 / (θ² + ω²)`                       |
//! | `DiffU`        | `dU`               | `ω² / (θ² + ω²)`                      |
//! | `Mixed`        | `γU dt + dW`       | `((γ + θ)² + ω²) / (θ² + ω²)`         |
//! | `Ar1Driven`    | `ε_k dt`, `dt = 1` | `−2 ln φ / ((1 − φ²)(ln²φ + ω²))`     |
//! | `Fgn`          | `dB^H`             | `∝ ω^(1 − 2H)`                        |
//!
//! `U` is the Ornstein-Uhlenbeck process `dU = −θU dt + dW`.
//!
//! [`GaussianStream`]: crate::GaussianStream

mod ar1;
mod fgn;
mod model;
mod ou;

use std::fmt;
use std::str::FromStr;

use crate::error::{require_positive, require_unit_open};
use crate::{Error, Result};

pub use ar1::{ar1_autocov, ar1_from_normals, ar1_sample};
pub use fgn::{fbm_autocov, fgn_autocov, fgn_sample, fgn_sample_sequential};
pub use model::{increments, theoretical_acf, theoretical_psd};
pub use ou::{ou_autocov, ou_exact_sample, ou_increment_cov, OuExactStep};

/// How the first value of a stationary recursion is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    /// Draw from the stationary law (consumes one normal).
    #[default]
    Stationary,
    Zero,
}

impl FromStr for InitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stationary" => Ok(InitMode::Stationary),
            "zero" => Ok(InitMode::Zero),
            other => Err(Error::Parse(format!("unknown init mode `{other}`"))),
        }
    }
}

impl fmt::Display for InitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitMode::Stationary => "stationary",
            InitMode::Zero => "zero",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Params {
    pub phi: f64,
    pub init: InitMode,
}

impl Ar1Params {
    pub fn new(phi: f64, init: InitMode) -> Result<Self> {
        let p = Ar1Params { phi, init };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_unit_open("phi", self.phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuParams {
    /// Mean-reversion rate (1/time).
    pub theta: f64,
    pub init: InitMode,
}

impl OuParams {
    pub fn new(theta: f64, init: InitMode) -> Result<Self> {
        let p = OuParams { theta, init };
        p.validate()?;
        Ok(p)
    }

    pub fn stationary(theta: f64) -> Result<Self> {
        Self::new(theta, InitMode::Stationary)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("theta", self.theta)
    }
}

/// Parameters of `dY = γU dt + dW` with `U` driven by the same `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedParams {
    pub theta: f64,
    /// Any finite real; `γ = −θ` gives `dY = dU`.
    pub gamma: f64,
}

impl MixedParams {
    pub fn new(theta: f64, gamma: f64) -> Result<Self> {
        let p = MixedParams { theta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("theta", self.theta)?;
        if !self.gamma.is_finite() {
            return Err(Error::param("gamma", self.gamma, "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgnParams {
    pub hurst: f64,
}

impl FgnParams {
    pub fn new(hurst: f64) -> Result<Self> {
        let p = FgnParams { hurst };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_unit_open("hurst", self.hurst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    White,
    RedOuDt(OuParams),
    DiffU(OuParams),
    Mixed(MixedParams),
    Ar1Driven(Ar1Params),
    Fgn(FgnParams),
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::White => Ok(()),
            NoiseModel::RedOuDt(p) | NoiseModel::DiffU(p) => p.validate(),
            NoiseModel::Mixed(p) => p.validate(),
            NoiseModel::Ar1Driven(p) => p.validate(),
            NoiseModel::Fgn(p) => p.validate(),
        }
    }

    /// Short tag used in the key-value text form.
    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::White => "white",
            NoiseModel::RedOuDt(_) => "red",
            NoiseModel::DiffU(_) => "du",
            NoiseModel::Mixed(_) => "mixed",
            NoiseModel::Ar1Driven(_) => "ar1",
            NoiseModel::Fgn(_) => "fgn",
        }
    }
}

/// Splits `key=value key=value ...` into pairs, rejecting duplicates.
pub fn parse_key_values(s: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for token in s.split_whitespace() {
        let (k, v) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{token}`")))?;
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse(format!("empty key or value in `{token}`")));
        }
        if out.iter().any(|(seen, _)| seen == k) {
            return Err(Error::Parse(format!("duplicate key `{k}`")));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

struct Fields {
    pairs: Vec<(String, String)>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<String> {
        let idx = self.pairs.iter().position(|(k, _)| k == key)?;
        Some(self.pairs.remove(idx).1)
    }

    fn number(&mut self, key: &'static str) -> Result<f64> {
        let raw = self
            .take(key)
            .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?;
        raw.parse::<f64>()
            .map_err(|_| Error::Parse(format!("`{key}` is not a number: `{raw}`")))
    }

    fn init(&mut self) -> Result<InitMode> {
        self.take("init").map_or(Ok(InitMode::Stationary), |v| v.parse())
    }

    fn finish(self) -> Result<()> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::Parse(format!("unexpected key `{k}`"))),
        }
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut f = Fields {
            pairs: parse_key_values(s)?,
        };
        let tag = f
            .take("model")
            .ok_or_else(|| Error::Parse("missing `model`".into()))?;
        let model = match tag.as_str() {
            "white" => NoiseModel::White,
            "red" => NoiseModel::RedOuDt(OuParams {
                theta: f.number("theta")?,
                init: f.init()?,
            }),
            "du" | "diffu" => NoiseModel::DiffU(OuParams {
                theta: f.number("theta")?,
                init: f.init()?,
            }),
            "mixed" => NoiseModel::Mixed(MixedParams {
                theta: f.number("theta")?,
                gamma: f.number("gamma")?,
            }),
            "ar1" => NoiseModel::Ar1Driven(Ar1Params {
                phi: f.number("phi")?,
                init: f.init()?,
            }),
            "fgn" => NoiseModel::Fgn(FgnParams {
                hurst: f.number("hurst")?,
            }),
            other => return Err(Error::Parse(format!("unknown model `{other}`"))),
        };
        f.finish()?;
        model.validate()?;
        Ok(model)
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "model={}", self.name())?;
        let init = |f: &mut fmt::Formatter<'_>, init: InitMode| match init {
            InitMode::Stationary => Ok(()),
            InitMode::Zero => write!(f, " init=zero"),
        };
        match self {
            NoiseModel::White => Ok(()),
            NoiseModel::RedOuDt(p) | NoiseModel::DiffU(p) => {
                write!(f, " theta={}", p.theta)?;
                init(f, p.init)
            }
            NoiseModel::Mixed(p) => write!(f, " theta={} gamma={}", p.theta, p.gamma),
            NoiseModel::Ar1Driven(p) => {
                write!(f, " phi={}", p.phi)?;
                init(f, p.init)
            }
            NoiseModel::Fgn(p) => write!(f, " hurst={}", p.hurst),
        }
    }
}

/// Uniformly sampled real-valued path.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub dt: f64,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        require_positive("dt", dt)?;
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::param("values", *v, "must be finite"));
        }
        Ok(TimeSeries { dt, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Noise differentials `ΔY_k` over a fixed step, tagged with their origin.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSeries {
    pub dt: f64,
    pub values: Vec<f64>,
    pub model: NoiseModel,
}

impl IncrementSeries {
    pub fn new(dt: f64, values: Vec<f64>, model: NoiseModel) -> Result<Self> {
        require_positive("dt", dt)?;
        if values.is_empty() {
            return Err(Error::InsufficientData("increment series is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::param("values", *v, "must be finite"));
        }
        Ok(IncrementSeries { dt, values, model })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn require_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InsufficientData("n must be >= 1".into()))
    } else {
        Ok(())
    }
}
