//! Model strings and series sources for the generating commands.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use rednoise::noise::{increments, parse_key_values};
use rednoise::sde::{simulate_continuous, simulate_discrete, ContinuousSystemParams, DiscreteSystemParams, SimConfig};
use rednoise::{GaussianStream, NoiseModel};

use crate::output::Format;
use crate::CliError;

/// A noise differential, the discrete system or the Euler-integrated
/// continuous system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Noise(NoiseModel),
    Discrete(DiscreteSystemParams),
    Continuous { params: ContinuousSystemParams, subsample: usize },
}

fn number(pairs: &mut Vec<(String, String)>, key: &str, default: Option<f64>) -> Result<f64, CliError> {
    match pairs.iter().position(|(k, _)| k == key) {
        Some(i) => {
            let raw = pairs.remove(i).1;
            raw.parse()
                .map_err(|_| CliError::Usage(format!("`{key}` is not a number: `{raw}`")))
        }
        None => default.ok_or_else(|| CliError::Usage(format!("missing `{key}`"))),
    }
}

fn no_leftovers(pairs: &[(String, String)]) -> Result<(), CliError> {
    match pairs.first() {
        None => Ok(()),
        Some((k, _)) => Err(CliError::Usage(format!("unexpected key `{k}`"))),
    }
}

impl FromStr for ModelSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut pairs = parse_key_values(s)?;
        let tag = pairs.iter().find(|(k, _)| k == "model").map(|(_, v)| v.clone());
        match tag.as_deref() {
            Some("discrete") => {
                pairs.retain(|(k, _)| k != "model");
                let p = DiscreteSystemParams {
                    psi: number(&mut pairs, "psi", None)?,
                    phi: number(&mut pairs, "phi", None)?,
                    sigma: number(&mut pairs, "sigma", Some(1.0))?,
                    x0: number(&mut pairs, "x0", Some(0.0))?,
                };
                no_leftovers(&pairs)?;
                p.validate()?;
                Ok(ModelSpec::Discrete(p))
            }
            Some("continuous") => {
                pairs.retain(|(k, _)| k != "model");
                let params = ContinuousSystemParams {
                    lambda: number(&mut pairs, "lambda", None)?,
                    theta: number(&mut pairs, "theta", None)?,
                    sigma: number(&mut pairs, "sigma", Some(1.0))?,
                    x0: number(&mut pairs, "x0", Some(0.0))?,
                };
                let sub = number(&mut pairs, "subsample", Some(1.0))?;
                no_leftovers(&pairs)?;
                params.validate()?;
                if !(sub >= 1.0 && sub.fract() == 0.0) {
                    return Err(CliError::Usage(format!("`subsample` must be a positive integer, got {sub}")));
                }
                Ok(ModelSpec::Continuous { params, subsample: sub as usize })
            }
            _ => Ok(ModelSpec::Noise(s.parse()?)),
        }
    }
}

/// A uniformly sampled series with the spacing it was produced on.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub dt: f64,
    pub values: Vec<f64>,
}

impl Series {
    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| k as f64 * self.dt).collect()
    }
}

/// Draws `n` values. Noise models give increments on step `dt`; the discrete
/// system lives on the unit grid; the continuous system uses `dt` as its
/// Euler step and emits every `subsample`-th value.
pub fn generate(spec: ModelSpec, n: usize, dt: f64, seed: u64) -> Result<Series, CliError> {
    let mut stream = GaussianStream::new(seed);
    match spec {
        ModelSpec::Noise(model) => {
            let incr = increments(model, dt, n, &mut stream)?;
            Ok(Series { dt: incr.dt, values: incr.values })
        }
        ModelSpec::Discrete(p) => {
            let x = simulate_discrete(p, n, &mut stream)?;
            Ok(Series { dt: x.dt, values: x.values })
        }
        ModelSpec::Continuous { params, subsample } => {
            let cfg = SimConfig { dt_fine: dt, subsample, n_out: n };
            let x = simulate_continuous(params, cfg, &mut stream)?;
            Ok(Series { dt: x.dt, values: x.values })
        }
    }
}

/// Reads a series written by `generate`. CSV files carry their own time
/// column; raw files need `dt`.
pub fn read_series(path: &Path, format: Format, dt: Option<f64>) -> Result<Series, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    match format {
        Format::F64le => {
            if bytes.len() % 8 != 0 {
                return Err(CliError::Usage(format!("{}: length is not a multiple of 8 bytes", path.display())));
            }
            let dt = dt.ok_or_else(|| CliError::Usage("raw input needs --dt".into()))?;
            let values = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
            Ok(Series { dt, values })
        }
        Format::Csv => {
            let text = String::from_utf8(bytes)
                .map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?;
            let mut times = Vec::new();
            let mut values = Vec::new();
            for (i, line) in text.lines().enumerate().skip(1) {
                if line.trim().is_empty() {
                    continue;
                }
                let bad = || CliError::Usage(format!("{}:{}: expected `t,value`", path.display(), i + 1));
                let (t, v) = line.split_once(',').ok_or_else(bad)?;
                times.push(t.trim().parse::<f64>().map_err(|_| bad())?);
                values.push(v.trim().parse::<f64>().map_err(|_| bad())?);
            }
            let dt = match dt {
                Some(d) => d,
                None if times.len() >= 2 => times[1] - times[0],
                None => return Err(CliError::Usage("cannot infer dt from fewer than two rows; pass --dt".into())),
            };
            Ok(Series { dt, values })
        }
    }
}
