//! Deterministic Gaussian streams.
//!
//! A [`GaussianStream`] wraps a ChaCha12 keystream keyed by a 64-bit
//! [`Seed`]. ChaCha exposes 2^64 independent stream ids per key, which is
//! used to derive reproducible substreams from one root seed: the root stream
//! is id 0, and [`GaussianStream::substream`] selects any other id. Normals
//! are produced with the ziggurat sampler from `rand_distr`, which is exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl From<u64> for Seed {
    fn from(value: u64) -> Self {
        Seed(value)
    }
}

impl std::str::FromStr for Seed {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(Seed)
    }
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Single-owner source of i.i.d. N(0, 1) variates.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    seed: Seed,
    stream_id: u64,
    count_drawn: u64,
    rng: ChaCha12Rng,
}

impl GaussianStream {
    pub fn new(seed: impl Into<Seed>) -> Self {
        Self::with_stream_id(seed.into(), 0)
    }

    pub fn with_stream_id(seed: Seed, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed.0);
        rng.set_stream(stream_id);
        GaussianStream {
            seed,
            stream_id,
            count_drawn: 0,
            rng,
        }
    }

    /// Fresh stream on the same seed with a different stream id.
    ///
    /// Substreams are statistically independent of each other and of the
    /// parent; the parent's draw count does not affect the result.
    pub fn substream(&self, stream_id: u64) -> Self {
        Self::with_stream_id(self.seed, stream_id)
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn count_drawn(&self) -> u64 {
        self.count_drawn
    }

    #[inline]
    pub fn next_gaussian(&mut self) -> f64 {
        self.count_drawn += 1;
        self.rng.sample(StandardNormal)
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = self.rng.sample(StandardNormal);
        }
        self.count_drawn += out.len() as u64;
    }

    pub fn gaussian_fill(&mut self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        self.fill(&mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn empty_draw() {
        let mut s = GaussianStream::new(42);
        assert!(s.gaussian_fill(0).is_empty());
        assert_eq!(s.count_drawn(), 0);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = GaussianStream::new(42).gaussian_fill(100);
        let b = GaussianStream::new(42).gaussian_fill(100);
        assert_eq!(a, b);
        let c = GaussianStream::new(43).gaussian_fill(100);
        assert_ne!(a, c);
    }

    #[test]
    fn single_draws_match_bulk_fill() {
        let bulk = GaussianStream::new(7).gaussian_fill(64);
        let mut s = GaussianStream::new(7);
        let one_by_one: Vec<f64> = (0..64).map(|_| s.next_gaussian()).collect();
        assert_eq!(bulk, one_by_one);
        assert_eq!(s.count_drawn(), 64);
    }

    #[test]
    fn substreams_differ_and_are_reproducible() {
        let root = GaussianStream::new(5);
        let a = root.substream(1).gaussian_fill(32);
        let b = root.substream(1).gaussian_fill(32);
        let c = root.substream(2).gaussian_fill(32);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, GaussianStream::new(5).gaussian_fill(32));
    }

    #[test]
    fn moments_within_clt_bounds() {
        let n = 1_000_000usize;
        let x = GaussianStream::new(42).gaussian_fill(n);
        let mean = x.iter().sum::<f64>() / n as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let tol = 4.0 / (n as f64).sqrt();
        assert!(mean.abs() < tol, "mean {mean}");
        assert!((var - 1.0).abs() < 5.0 / (n as f64).sqrt(), "var {var}");
    }

    #[test]
    fn lag_one_correlation_is_negligible() {
        let n = 1_000_000usize;
        let x = GaussianStream::new(11).gaussian_fill(n);
        let r1 = x.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / x.iter().map(|v| v * v).sum::<f64>();
        assert!(r1.abs() < 4.0 / (n as f64).sqrt(), "r1 {r1}");
    }

    #[test]
    fn kolmogorov_smirnov_against_standard_normal() {
        let n = 100_000usize;
        let mut x = GaussianStream::new(2024).gaussian_fill(n);
        x.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut d = 0.0f64;
        for (i, v) in x.iter().enumerate() {
            let f = normal.cdf(*v);
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((f - lo).abs()).max((hi - f).abs());
        }
        // Asymptotic 1% critical value.
        let crit = 1.628 / (n as f64).sqrt();
        assert!(d < crit, "KS statistic {d} >= {crit}");
    }
}
