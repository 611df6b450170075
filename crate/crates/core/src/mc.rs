//! Deterministic Monte Carlo plumbing.
//!
//! Sampling is sharded: a run of `n` samples is split into fixed-size shards,
//! each shard draws from its own ChaCha stream keyed by `(seed, purpose,
//! shard index)`, and per-shard partial results are reduced in shard order.
//! The result is bit-identical whether shards run sequentially or on a rayon
//! pool of any width.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per shard. Fixed so that results do not depend on thread count.
pub const SHARD_SIZE: u64 = 1 << 14;

/// Sampling budget and seed for one stochastic evaluation.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Quality {
    pub samples: u64,
    pub seed: u64,
}

impl Quality {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed }
    }
}

/// Independent stream families, so different estimators keyed by the same
/// user seed never share draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u32)]
pub enum StreamKind {
    Volume = 1,
    Sausage = 2,
    Rotation = 3,
    HaarIdentity = 4,
    TranslationAverage = 5,
    Subaverage = 6,
    InteractionAverage = 7,
    Experiment = 8,
    Containment = 9,
    Generic = 10,
    Energy = 11,
}

/// RNG for stream `(seed, kind, index)`. ChaCha is counter-based: streams are
/// independent and each is seekable, so a shard owns its draws outright.
pub fn stream_rng(seed: u64, kind: StreamKind, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..12].copy_from_slice(&(kind as u32).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Shard layout for a total sample count: `(shard index, samples in shard)`.
pub fn shards(total: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut done = 0;
    let mut idx = 0;
    while done < total {
        let n = SHARD_SIZE.min(total - done);
        out.push((idx, n));
        done += n;
        idx += 1;
    }
    out
}

/// Map shards sequentially, preserving shard order.
pub fn map_shards_seq<T, F>(total: u64, f: F) -> Vec<T>
where
    F: Fn(u64, u64) -> T,
{
    shards(total).into_iter().map(|(i, n)| f(i, n)).collect()
}

/// Map shards on the rayon pool; the collected order is still shard order.
#[cfg(feature = "parallel")]
pub fn map_shards_par<T, F>(total: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    use rayon::prelude::*;
    shards(total)
        .into_par_iter()
        .map(|(i, n)| f(i, n))
        .collect()
}

/// Map shards with the configured execution mode.
pub fn map_shards<T, F>(total: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        map_shards_par(total, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_shards_seq(total, f)
    }
}

/// Ordered map over `0..n`, parallel when the feature is enabled.
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Running first and second moments of a scalar sample.
#[derive(Debug, Clone, Copy, Default)]
pub struct MomentAcc {
    pub sum: f64,
    pub sum_sq: f64,
    pub n: u64,
}

impl MomentAcc {
    pub fn push(&mut self, y: f64) {
        self.sum += y;
        self.sum_sq += y * y;
        self.n += 1;
    }

    /// Fold in shard order; addition order is fixed by the caller's ordering.
    pub fn combine(&mut self, other: &MomentAcc) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.n += other.n;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Standard error of the mean (sample standard deviation / sqrt n).
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Mean and standard error of `f` over `samples` draws, sharded and ordered.
pub fn mc_mean<F>(samples: u64, seed: u64, kind: StreamKind, f: F) -> MomentAcc
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let partials = map_shards(samples, |idx, n| {
        let mut rng = stream_rng(seed, kind, idx);
        let mut acc = MomentAcc::default();
        for _ in 0..n {
            acc.push(f(&mut rng));
        }
        acc
    });
    let mut total = MomentAcc::default();
    for p in &partials {
        total.combine(p);
    }
    total
}

/// Sequential twin of [`mc_mean`], kept for the determinism check and the
/// benchmark comparison.
pub fn mc_mean_seq<F>(samples: u64, seed: u64, kind: StreamKind, f: F) -> MomentAcc
where
    F: Fn(&mut ChaCha8Rng) -> f64,
{
    let partials = map_shards_seq(samples, |idx, n| {
        let mut rng = stream_rng(seed, kind, idx);
        let mut acc = MomentAcc::default();
        for _ in 0..n {
            acc.push(f(&mut rng));
        }
        acc
    });
    let mut total = MomentAcc::default();
    for p in &partials {
        total.combine(p);
    }
    total
}

/// A scalar measure estimated by Monte Carlo (or exactly, with zero stderr).
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MeasureEstimate {
    pub fn exact(value: f64, seed: u64) -> Self {
        Self {
            value,
            stderr: 0.0,
            samples: 0,
            seed,
        }
    }

    pub fn from_moments(acc: &MomentAcc, scale: f64, seed: u64) -> Self {
        Self {
            value: scale * acc.mean(),
            stderr: scale.abs() * acc.stderr(),
            samples: acc.n,
            seed,
        }
    }

    /// |value - reference| expressed in standard errors (infinite if stderr 0
    /// and values differ).
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        let d = (self.value - reference).abs();
        if self.stderr == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.stderr
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn shard_layout_covers_total() {
        let total = 3 * SHARD_SIZE + 17;
        let s = shards(total);
        assert_eq!(s.iter().map(|&(_, n)| n).sum::<u64>(), total);
        assert_eq!(s.len(), 4);
        assert_eq!(s[3], (3, 17));
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let f = |rng: &mut rand_chacha::ChaCha8Rng| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            (x * x + y * y).sqrt()
        };
        let a = mc_mean(100_000, 42, StreamKind::Generic, f);
        let b = mc_mean_seq(100_000, 42, StreamKind::Generic, f);
        assert_eq!(a.sum.to_bits(), b.sum.to_bits());
        assert_eq!(a.sum_sq.to_bits(), b.sum_sq.to_bits());
        assert_eq!(a.n, b.n);
    }

    #[test]
    fn streams_are_independent() {
        let mut a = stream_rng(7, StreamKind::Volume, 0);
        let mut b = stream_rng(7, StreamKind::Rotation, 0);
        let xa: f64 = a.random();
        let xb: f64 = b.random();
        assert_ne!(xa, xb);
    }

    #[test]
    fn indicator_stderr_matches_binomial() {
        // Indicator with p = 1 has zero spread.
        let acc = mc_mean(10_000, 1, StreamKind::Generic, |_| 1.0);
        assert_eq!(acc.stderr(), 0.0);
        assert_eq!(acc.mean(), 1.0);
    }
}
