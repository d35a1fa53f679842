//! Seeded random streams and Monte Carlo bookkeeping.
//!
//! All randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(seed)`. Work split across `w` workers uses the same key with
//! stream id `0..w`, and partial statistics are merged in worker order, so a
//! result depends only on `(seed, samples, workers)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::direction::Direction3;
use crate::error::{GhostError, Result};
use crate::scalar::Real;

/// The generator used everywhere in the crate.
pub type SimRng = ChaCha20Rng;

/// How many samples to draw, from which seed, on how many workers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McPlan {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McPlan {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, workers: 1 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub(crate) fn check(&self, minimum: u64) -> Result<()> {
        if self.samples < minimum {
            return Err(GhostError::TooFewSamples { requested: self.samples, minimum });
        }
        if self.workers == 0 {
            return Err(GhostError::NoWorkers);
        }
        Ok(())
    }

    /// Sample counts per worker; the first `samples % workers` get one extra.
    pub fn chunks(&self) -> Vec<u64> {
        let w = self.workers.max(1) as u64;
        let (base, extra) = (self.samples / w, self.samples % w);
        (0..w).map(|i| base + u64::from(i < extra)).collect()
    }
}

/// Generator for one worker's stream.
pub fn worker_rng(seed: u64, worker: usize) -> SimRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// Derives an independent seed for sub-task `index` (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform point on the sphere: `z ~ U[−1, 1]`, `φ ~ U[0, 2π)`.
pub fn uniform_direction<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Direction3<T> {
    let z = T::lit(2.0 * rng.gen::<f64>() - 1.0);
    let phi = T::lit(std::f64::consts::TAU * rng.gen::<f64>());
    let r = (T::one() - z * z).max(T::zero()).sqrt();
    let (s, c) = phi.sin_cos();
    Direction3::new_unchecked(r * c, r * s, z)
}

/// Welford accumulator for mean and variance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunningStats<T> {
    count: u64,
    mean: T,
    m2: T,
}

impl<T: Real> Default for RunningStats<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> RunningStats<T> {
    pub fn new() -> Self {
        Self { count: 0, mean: T::zero(), m2: T::zero() }
    }

    pub fn push(&mut self, x: T) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / T::lit(self.count as f64);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&self, other: &Self) -> Self {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (
            T::lit(self.count as f64),
            T::lit(other.count as f64),
            T::lit(count as f64),
        );
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    /// Sample variance with the `n − 1` denominator; zero below two samples.
    pub fn sample_variance(&self) -> T {
        if self.count < 2 {
            T::zero()
        } else {
            self.m2 / T::lit((self.count - 1) as f64)
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MCEstimate<T> {
    pub mean: T,
    /// Sample standard deviation of the per-sample estimator divided by `√n`.
    pub stderr: T,
    pub n_samples: u64,
    pub seed: u64,
}

impl<T: Real> MCEstimate<T> {
    pub fn from_stats(stats: &RunningStats<T>, seed: u64) -> Self {
        let n = stats.count();
        let stderr = if n == 0 {
            T::zero()
        } else {
            (stats.sample_variance() / T::lit(n as f64)).sqrt()
        };
        Self { mean: stats.mean(), stderr, n_samples: n, seed }
    }

    /// `|mean − target| ≤ k · stderr`.
    pub fn within(&self, target: T, k: T) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Runs `body(rng, n)` once per worker and merges the partial statistics in
/// worker order.
pub fn run_plan<T, F>(plan: &McPlan, body: F) -> MCEstimate<T>
where
    T: Real,
    F: Fn(&mut SimRng, u64) -> RunningStats<T> + Sync,
{
    let chunks = plan.chunks();
    let parts: Vec<RunningStats<T>> = chunks
        .par_iter()
        .enumerate()
        .map(|(w, &n)| body(&mut worker_rng(plan.seed, w), n))
        .collect();
    let total = parts.iter().fold(RunningStats::new(), |acc, p| acc.merge(p));
    MCEstimate::from_stats(&total, plan.seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn chunks_cover_all_samples() {
        let plan = McPlan::new(10, 1).with_workers(3);
        assert_eq!(plan.chunks(), vec![4, 3, 3]);
        assert_eq!(McPlan::new(7, 0).chunks(), vec![7]);
    }

    #[test]
    fn plan_checks() {
        assert_eq!(
            McPlan::new(999, 0).check(1000),
            Err(GhostError::TooFewSamples { requested: 999, minimum: 1000 })
        );
        assert_eq!(McPlan::new(1000, 0).with_workers(0).check(1000), Err(GhostError::NoWorkers));
        assert!(McPlan::new(1000, 0).check(1000).is_ok());
    }

    #[test]
    fn worker_streams_differ_and_repeat() {
        let a: Vec<u64> = (0..4).map(|_| worker_rng(5, 0).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(worker_rng(5, 0).next_u64(), worker_rng(5, 1).next_u64());
        assert_ne!(worker_rng(5, 0).next_u64(), worker_rng(6, 0).next_u64());
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..101).map(|i| ((i * 37) % 17) as f64 * 0.25 - 1.0).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;

        let mut whole = RunningStats::new();
        xs.iter().for_each(|&x| whole.push(x));
        assert!((whole.mean() - mean).abs() < 1e-14);
        assert!((whole.sample_variance() - var).abs() < 1e-13);

        let (mut l, mut r) = (RunningStats::new(), RunningStats::new());
        xs[..40].iter().for_each(|&x| l.push(x));
        xs[40..].iter().for_each(|&x| r.push(x));
        let merged = l.merge(&r);
        assert_eq!(merged.count(), 101);
        assert!((merged.mean() - mean).abs() < 1e-14);
        assert!((merged.sample_variance() - var).abs() < 1e-13);
    }

    #[test]
    fn uniform_directions_are_unit_and_centered() {
        let mut rng = worker_rng(9, 0);
        let mut sum = [0.0; 3];
        let n = 200_000;
        for _ in 0..n {
            let d: Direction3<f64> = uniform_direction(&mut rng);
            assert!((d.dot(&d) - 1.0).abs() < 1e-12);
            for (s, c) in sum.iter_mut().zip(d.components()) {
                *s += c;
            }
        }
        // each component has variance 1/3
        let bound = 4.0 * (1.0 / 3.0 / n as f64).sqrt();
        for s in sum {
            assert!((s / n as f64).abs() < bound);
        }
    }

    #[test]
    fn run_plan_is_deterministic_per_worker_count() {
        let body = |rng: &mut SimRng, n: u64| {
            let mut s = RunningStats::new();
            for _ in 0..n {
                s.push(rng.gen::<f64>());
            }
            s
        };
        let plan = McPlan::new(10_000, 3).with_workers(4);
        let a = run_plan(&plan, body);
        let b = run_plan(&plan, body);
        assert_eq!(a, b);
        assert_eq!(a.n_samples, 10_000);
        assert!(a.within(0.5, 4.0));
    }
}
