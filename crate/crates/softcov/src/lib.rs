//! Soft-covering laboratory for finite discrete memoryless channels.
//!
//! A random codebook of `M` codewords drawn i.i.d. from `P_X^n` induces an
//! output distribution when a uniformly chosen codeword is pushed through a
//! memoryless channel `P_{Y|X}`. This crate measures how fast that induced
//! distribution approaches the product output distribution `P_Y^n`, in both
//! relative entropy and total variation, and evaluates the matching
//! large-deviation exponents, polynomial prefactors, and one-shot bounds.
//!
//! Modules:
//! - [`channel`]: validated channel model and exact information-density moments
//! - [`exponents`]: tilted measures, exponent solvers, Renyi-type mutual
//!   informations, and one-shot upper bounds
//! - [`simulator`]: reproducible random-codebook sampling, exact divergence
//!   evaluation of induced distributions, and Poissonized statistics
//! - [`oracles`]: exact sum-distribution convolutions and standalone
//!   inequality validators used as ground truth by tests and `verify`
//!
//! Everything is measured in nats. All randomness flows through counter-based
//! streams keyed by explicit seeds, so results are reproducible bit for bit
//! across runs and thread counts.

pub mod channel;
pub mod exponents;
pub mod oracles;
pub mod rng;
pub mod simulator;
pub mod stats;

pub use channel::{build_channel, load_channel, DensityMoments, DiscreteChannel};
pub use exponents::{exponent_report, ExponentReport};
pub use oracles::{DensitySumDistribution, WindowEvent};
pub use simulator::{estimate_soft_covering, SizeMode, TrialBatch};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-stochastic {what}: {detail}")]
    NonStochastic { what: String, detail: String },

    #[error("empty alphabet after pruning zero-mass symbols")]
    EmptyAlphabet,

    #[error("{path}:{line}: {msg}")]
    ChannelFile {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("rate {rate} nats must exceed the mutual information {mi} nats")]
    RateBelowMi { rate: f64, mi: f64 },

    #[error("output space {card}^{n} exceeds the 2^24 exact-distribution cap")]
    MemoryCap { card: usize, n: usize },

    #[error("codebook is empty")]
    EmptyCodebook,

    #[error("induced distribution places mass {mass:e} on a zero-probability output sequence")]
    AbsoluteContinuity { mass: f64 },

    #[error("convolution support {support} exceeds the 10^7 atom cap")]
    SupportOverflow { support: usize },

    #[error("invalid moments: {0}")]
    InvalidMoments(String),

    #[error("order expression undefined at the boundary tau* = 1")]
    TauAtBoundary,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid window: lower {lower} exceeds upper {upper}")]
    InvalidWindow { lower: f64, upper: f64 },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::channel::{build_channel, DiscreteChannel};

    pub fn identity2() -> DiscreteChannel {
        build_channel(&[0.5, 0.5], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    pub fn bsc(eps: f64) -> DiscreteChannel {
        build_channel(&[0.5, 0.5], &[vec![1.0 - eps, eps], vec![eps, 1.0 - eps]]).unwrap()
    }

    /// Binary erasure channel: outputs are {0, erasure, 1}.
    pub fn bec(eps: f64) -> DiscreteChannel {
        build_channel(
            &[0.5, 0.5],
            &[vec![1.0 - eps, eps, 0.0], vec![0.0, eps, 1.0 - eps]],
        )
        .unwrap()
    }

    /// Input independent of output: every row equals the output marginal.
    pub fn product_channel() -> DiscreteChannel {
        build_channel(&[0.4, 0.6], &[vec![0.3, 0.7], vec![0.3, 0.7]]).unwrap()
    }
}
