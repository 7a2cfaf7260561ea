//! Reproducible Monte Carlo means.
//!
//! Stream rule: sample `i` of an estimator with master seed `s` is drawn from
//! chunk `c = i / CHUNK`, whose generator is `ChaCha8Rng::seed_from_u64(s)`
//! switched to stream `c`. Chunks may run on any thread; their partial
//! statistics are merged in chunk order, so estimates are bit-identical for
//! every thread count.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{BohrError, Result};

/// Samples per independent stream.
pub const CHUNK: usize = 4096;

/// Generator for stream `stream` under master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed of trial `index` derived from a master seed: the first output of a
/// stream reserved for trial seeding (high bit set, disjoint from sample chunks).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    stream_rng(master, (1u64 << 63) | index).next_u64()
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Estimate {
    /// `|value - target| <= k * standard_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.standard_error
    }

    /// The estimate of `m^{1/p}` from an estimate of `m`, with the standard
    /// error propagated to first order.
    pub fn root(self, p: f64) -> Estimate {
        if p == 1.0 {
            return self;
        }
        let value = self.value.max(0.0).powf(1.0 / p);
        let standard_error = if self.value > 0.0 {
            self.standard_error * value / (p * self.value)
        } else {
            0.0
        };
        Estimate {
            value,
            standard_error,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    // Chan et al. pairwise update.
    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Mean of `sample(rng)` over `samples` draws.
///
/// `make_state` builds per-chunk scratch state; `sample` draws one value.
pub fn mc_mean<S, I, F>(samples: usize, seed: u64, make_state: I, sample: F) -> Result<Estimate>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &mut ChaCha8Rng) -> f64 + Sync,
{
    if samples == 0 {
        return Err(BohrError::domain("Monte Carlo needs at least one sample"));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let mut state = make_state();
            let count = CHUNK.min(samples - c * CHUNK);
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(sample(&mut state, &mut rng));
            }
            m
        })
        .collect();
    let total = partial.into_iter().fold(Moments::default(), Moments::merge);
    let var = if total.n > 1.0 {
        total.m2 / (total.n - 1.0)
    } else {
        0.0
    };
    Ok(Estimate {
        value: total.mean,
        standard_error: (var / total.n).sqrt(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn constant_samples_are_exact() {
        let e = mc_mean(10_000, 1, || (), |_, _| 1.0).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.standard_error, 0.0);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(mc_mean(0, 1, || (), |_, _| 1.0).is_err());
    }

    #[test]
    fn uniform_mean_and_reproducibility() {
        let f = |_: &mut (), r: &mut ChaCha8Rng| r.random::<f64>();
        let a = mc_mean(50_000, 9, || (), f).unwrap();
        assert!(a.within(0.5, 4.0));
        let expected_se = (1.0f64 / 12.0 / 50_000.0).sqrt();
        assert!((a.standard_error - expected_se).abs() < 0.05 * expected_se);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| mc_mean(50_000, 9, || (), f).unwrap());
        assert_eq!(a, b);
        let c = mc_mean(50_000, 10, || (), f).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_eq!(trial_seed(1, 5), trial_seed(1, 5));
    }
}
