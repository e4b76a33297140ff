//! Correlated-noise generation, closed-form spectra and spectral estimators.
//!
//! The crate generates the common "red noise" differentials (white noise
//! `dW`, the integrated Ornstein-Uhlenbeck differential `U dt`, the OU
//! differential `dU`, the mixed differential `γU dt + dW`, AR(1)-driven
//! noise and fractional Gaussian noise), evaluates their closed-form
//! autocovariances and power spectral densities, and provides the empirical
//! estimators needed to compare the two.
//!
//! Modules:
//!
//! - [`rng`]: seedable Gaussian streams with independent substreams.
//! - [`noise`]: samplers and closed-form oracles for every noise family.
//! - [`sde`]: the linearly restoring example in discrete and continuous time.
//! - [`spectral`]: periodogram, band averaging, empirical ACF, log-log fits.
//! - [`theorem`]: finite-horizon spectral closed forms and the martingale
//!   part experiment.

pub mod noise;
pub mod rng;
pub mod sde;
pub mod spectral;
pub mod stats;
pub mod theorem;

mod error;

pub use error::{Error, Result};
pub use noise::{IncrementSeries, NoiseModel, TimeSeries};
pub use rng::{GaussianStream, Seed};
