//! Deterministic random streams and exact Poisson sampling.
//!
//! Every consumer derives its own ChaCha stream from `(master_seed, stream
//! tag, index)`, so Monte Carlo results are invariant to scheduling and
//! thread count. ChaCha is a counter-based generator with a stable,
//! platform-independent output sequence.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags keep the per-trial substreams disjoint.
pub const STREAM_CODEBOOK: u64 = 0x636f6465626f6f6b; // "codebook"
pub const STREAM_SIZE: u64 = 0x73697a6564726177; // "sizedraw"
pub const STREAM_OUTPUT: u64 = 0x6f757470757473; // "outputs"
pub const STREAM_AUX: u64 = 0x617578696c697279; // "auxiliry"

#[inline]
fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Collapse `(master, stream, index)` into a single well-mixed 64-bit seed.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut h = mix(master);
    h = mix(h ^ mix(stream));
    mix(h ^ mix(index))
}

/// Fresh deterministic generator for the given `(master, stream, index)` key.
pub fn stream_rng(master: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, index))
}

/// Cumulative sums of a probability vector, for inverse-CDF sampling.
pub fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

/// Inverse-CDF lookup: smallest index whose cumulative mass exceeds `u`.
#[inline]
pub fn sample_index(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Exact Poisson sampler.
///
/// Inversion for small means; transformed rejection (Hormann's PTRS) above.
/// Both are exact in distribution -- no normal approximation anywhere, so
/// tail frequencies can be tested against Chernoff constants directly.
pub struct PoissonSampler {
    mu: f64,
    ln_mu: f64,
    // PTRS constants, populated only for the rejection branch.
    b: f64,
    a: f64,
    inv_alpha: f64,
    v_r: f64,
    log_fact: Vec<f64>,
}

/// Inversion is used up to this mean.
pub const POISSON_INVERSION_MAX_MEAN: f64 = 10.0;

impl PoissonSampler {
    pub fn new(mu: f64) -> Self {
        assert!(mu.is_finite() && mu > 0.0, "Poisson mean must be positive");
        let b = 0.931 + 2.53 * mu.sqrt();
        PoissonSampler {
            mu,
            ln_mu: mu.ln(),
            b,
            a: -0.059 + 0.02483 * b,
            inv_alpha: 1.1239 + 1.1328 / (b - 3.4),
            v_r: 0.9277 - 3.6224 / (b - 2.0),
            log_fact: vec![0.0, 0.0],
        }
    }

    pub fn mean(&self) -> f64 {
        self.mu
    }

    fn ln_factorial(&mut self, k: u64) -> f64 {
        let k = k as usize;
        while self.log_fact.len() <= k {
            let next = self.log_fact.len();
            let last = *self.log_fact.last().unwrap();
            self.log_fact.push(last + (next as f64).ln());
        }
        self.log_fact[k]
    }

    pub fn sample(&mut self, rng: &mut ChaCha8Rng) -> u64 {
        if self.mu <= POISSON_INVERSION_MAX_MEAN {
            self.sample_inversion(rng)
        } else {
            self.sample_rejection(rng)
        }
    }

    /// Draw conditioned on the value being positive; returns the draw and the
    /// number of rejected zeros.
    pub fn sample_positive(&mut self, rng: &mut ChaCha8Rng) -> (u64, u64) {
        let mut zeros = 0;
        loop {
            let m = self.sample(rng);
            if m > 0 {
                return (m, zeros);
            }
            zeros += 1;
        }
    }

    fn sample_inversion(&mut self, rng: &mut ChaCha8Rng) -> u64 {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = (-self.mu).exp();
        let mut f = p;
        // P[K > 400] is below 1e-200 for mu <= 10; the cap only guards
        // against a pathological u == 1.0 - ulp draw.
        while u >= f && k < 400 {
            k += 1;
            p *= self.mu / k as f64;
            f += p;
        }
        k
    }

    fn sample_rejection(&mut self, rng: &mut ChaCha8Rng) -> u64 {
        loop {
            let u: f64 = rng.random::<f64>() - 0.5;
            let v: f64 = rng.random();
            let us = 0.5 - u.abs();
            let k = ((2.0 * self.a / us + self.b) * u + self.mu + 0.43).floor();
            if us >= 0.07 && v <= self.v_r {
                return k as u64;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            let k_int = k as u64;
            let lhs = (v * self.inv_alpha / (self.a / (us * us) + self.b)).ln();
            let rhs = k * self.ln_mu - self.mu - self.ln_factorial(k_int);
            if lhs <= rhs {
                return k_int;
            }
        }
    }
}
