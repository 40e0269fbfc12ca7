//! Exact sum-distribution machinery and standalone inequality validators.
//!
//! The workhorse is [`DensitySumDistribution`]: the exact law of an n-fold
//! i.i.d. sum of a finite-support value distribution, built by repeated
//! convolution with value coalescing. It powers every exact expectation of
//! the form `E[exp(c * Sum) 1{Sum in window}]` that the moment bounds and the
//! Berry-Esseen-type check need, without enumerating sequence space.

use rayon::prelude::*;

use crate::channel::DiscreteChannel;
use crate::simulator::{self, SizeMode};
use crate::stats;
use crate::{Error, Result};

/// Atoms closer than this relative distance are merged during convolution.
/// Lattice-valued summands (e.g. crossover channels) would otherwise
/// fragment into clouds of near-duplicate atoms.
pub const COALESCE_RELATIVE_TOLERANCE: f64 = 1e-14;

/// Hard cap on the number of distinct atoms.
pub const SUPPORT_CAP: usize = 10_000_000;

/// A closed interval `[lower, upper]` on the sum axis; either side may be
/// infinite. Parametrizes the typicality-window events used by the converse
/// bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowEvent {
    lower: f64,
    upper: f64,
}

impl WindowEvent {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::InvalidWindow { lower, upper });
        }
        Ok(WindowEvent { lower, upper })
    }

    pub fn full() -> Self {
        WindowEvent {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn at_least(lower: f64) -> Self {
        WindowEvent {
            lower,
            upper: f64::INFINITY,
        }
    }

    pub fn at_most(upper: f64) -> Self {
        WindowEvent {
            lower: f64::NEG_INFINITY,
            upper,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_full(&self) -> bool {
        self.lower == f64::NEG_INFINITY && self.upper == f64::INFINITY
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower && v <= self.upper
    }
}

/// Exact finite law of a real-valued random variable (or of an i.i.d. sum of
/// one), stored as strictly increasing `(value, probability)` atoms.
#[derive(Debug, Clone)]
pub struct DensitySumDistribution {
    values: Vec<f64>,
    probs: Vec<f64>,
}

impl DensitySumDistribution {
    /// Build from unsorted atoms; sorts, merges near-equal values, and
    /// validates total mass.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        for &(v, p) in atoms {
            if !v.is_finite() {
                return Err(Error::InvalidDistribution(format!("non-finite value {v}")));
            }
            if p.is_nan() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "negative probability {p}"
                )));
            }
        }
        let mut sorted: Vec<(f64, f64)> = atoms.iter().copied().filter(|&(_, p)| p > 0.0).collect();
        if sorted.is_empty() {
            return Err(Error::InvalidDistribution("zero total mass".into()));
        }
        sorted.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let mut values = Vec::with_capacity(sorted.len());
        let mut probs: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut cur_v = sorted[0].0;
        let mut cur_p = sorted[0].1;
        let mut cur_vp = sorted[0].0 * sorted[0].1;
        for &(v, p) in &sorted[1..] {
            let tol = COALESCE_RELATIVE_TOLERANCE * cur_v.abs().max(v.abs());
            if v - cur_v <= tol {
                cur_p += p;
                cur_vp += v * p;
            } else {
                values.push(cur_vp / cur_p);
                probs.push(cur_p);
                cur_v = v;
                cur_p = p;
                cur_vp = v * p;
            }
        }
        values.push(cur_vp / cur_p);
        probs.push(cur_p);

        if values.len() > SUPPORT_CAP {
            return Err(Error::SupportOverflow {
                support: values.len(),
            });
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "total mass {mass} is not 1"
            )));
        }
        Ok(DensitySumDistribution { values, probs })
    }

    /// Law of the information density `i(X;Y)` under `P_{XY}`.
    pub fn of_information_density(ch: &DiscreteChannel) -> Result<Self> {
        Self::from_atoms(&ch.density_atoms())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.atoms().map(|(v, p)| v * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.atoms().map(|(v, p)| p * (v - m) * (v - m)).sum()
    }

    /// `E[|W|^3]` of the raw values (not centered).
    pub fn abs_third_moment(&self) -> f64 {
        self.atoms().map(|(v, p)| p * v.abs().powi(3)).sum()
    }

    /// Exact law of the n-fold i.i.d. sum, by repeated convolution.
    pub fn convolve_n(&self, n: usize) -> Result<Self> {
        assert!(n >= 1, "need at least one summand");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.convolve_with(self)?;
        }
        Ok(acc)
    }

    fn convolve_with(&self, other: &Self) -> Result<Self> {
        let raw = self
            .len()
            .checked_mul(other.len())
            .ok_or(Error::SupportOverflow {
                support: usize::MAX,
            })?;
        if raw > 2 * SUPPORT_CAP {
            return Err(Error::SupportOverflow { support: raw });
        }
        let mut atoms = Vec::with_capacity(raw);
        for (va, pa) in self.atoms() {
            for (vb, pb) in other.atoms() {
                atoms.push((va + vb, pa * pb));
            }
        }
        Self::from_atoms(&atoms)
    }

    /// `Sum over atoms v in window of p(v) * exp(weight * v)`.
    pub fn window_expectation(&self, weight: f64, window: &WindowEvent) -> f64 {
        let lo = self.values.partition_point(|&v| v < window.lower());
        let hi = self.values.partition_point(|&v| v <= window.upper());
        let mut sum = 0.0;
        for i in lo..hi {
            sum += self.probs[i] * (weight * self.values[i]).exp();
        }
        sum
    }
}

/// Lower bound on `E[U log U]` for positive unit-mean `U` from its second
/// and third central moments: `m2^2 / (2 m2 + (2/3) m3)`.
pub fn u_logu_lower_bound(m2: f64, m3: f64) -> Result<f64> {
    if m2.is_nan() || m2 < 0.0 {
        return Err(Error::InvalidMoments(format!("m2 = {m2} is negative")));
    }
    if m2 == 0.0 {
        return Ok(0.0);
    }
    let denom = 2.0 * m2 + (2.0 / 3.0) * m3;
    if denom <= 0.0 {
        // impossible for a genuine unit-mean positive variable
        return Err(Error::InvalidMoments(format!(
            "denominator 2*m2 + (2/3)*m3 = {denom} is non-positive"
        )));
    }
    Ok(m2 * m2 / denom)
}

/// Lower bound on `E|U - E U|` from central moments: `sqrt(v2^3 / v4)`.
pub fn tv_moment_lower_bound(v2: f64, v4: f64) -> Result<f64> {
    if v2.is_nan() || v2 < 0.0 || v4.is_nan() || v4 < 0.0 {
        return Err(Error::InvalidMoments(format!(
            "negative moment: v2={v2}, v4={v4}"
        )));
    }
    if v2 == 0.0 {
        return Ok(0.0);
    }
    if v4 == 0.0 {
        return Err(Error::InvalidMoments(
            "v4 = 0 with positive variance".into(),
        ));
    }
    Ok((v2.powi(3) / v4).sqrt())
}

/// Windowed moment lower bound on `E[T log T]` for the Poissonized
/// codebook sum at mean `2 exp(n rate)`:
/// `(1/4) min{ E1 / mu_n, 3 E1^2 / E2 }` with
/// `Ek = E[exp(k * Sum i) 1{Sum i in window}]` under `P_{XY}^n`.
pub fn t_logt_window_lower_bound(
    ch: &DiscreteChannel,
    n: usize,
    rate: f64,
    window: &WindowEvent,
) -> Result<f64> {
    let dist = DensitySumDistribution::of_information_density(ch)?.convolve_n(n)?;
    let e1 = dist.window_expectation(1.0, window);
    if e1 <= 0.0 {
        return Ok(0.0);
    }
    let e2 = dist.window_expectation(2.0, window);
    let mu_n = 2.0 * (n as f64 * rate).exp();
    Ok(0.25 * (e1 / mu_n).min(3.0 * e1 * e1 / e2))
}

/// Exact tail functional vs. its Berry-Esseen-type exponential envelope.
///
/// For i.i.d. zero-mean summands `V` with variance `sigma^2` and absolute
/// third moment `T3`, the bound is
/// `E[exp(-Sum V) 1{Sum V >= A}] <= (C/sqrt(n)) exp(-A)` with
/// `C = (2/sigma) (log2/sqrt(2 pi) + 12 T3 / sigma^2)`.
/// Returns `(exact, bound)`; callers assert `exact <= bound`.
pub fn berry_esseen_exponential_bound_check(
    base: &DensitySumDistribution,
    n: usize,
    a_threshold: f64,
) -> Result<(f64, f64)> {
    let mean = base.mean();
    if mean.abs() > 1e-12 {
        return Err(Error::InvalidDistribution(format!(
            "summands must be zero-mean, got mean {mean:e}"
        )));
    }
    let sigma2 = base.variance();
    if sigma2 <= 0.0 {
        return Err(Error::InvalidDistribution(
            "summands must have positive variance".into(),
        ));
    }
    let t3 = base.abs_third_moment();
    let sigma = sigma2.sqrt();
    let c = (2.0 / sigma)
        * (std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI).sqrt() + 12.0 * t3 / sigma2);

    let dist = base.convolve_n(n)?;
    let exact = dist.window_expectation(-1.0, &WindowEvent::at_least(a_threshold));
    let bound = c / (n as f64).sqrt() * (-a_threshold).exp();
    Ok((exact, bound))
}

/// Which f-divergence a monotonicity run measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FDivergenceKind {
    Kl,
    Tv,
}

/// Outcome of a paired-codebook monotonicity run.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    /// Sample mean of the divergence at each codebook size `1..=m_max`.
    pub means: Vec<f64>,
    /// Per-step paired difference `mean_m - mean_{m+1}` and its stderr.
    pub step_diffs: Vec<(f64, f64)>,
    /// True when every step is nonincreasing within 4 stderr.
    pub nonincreasing: bool,
}

/// Checks that the expected divergence of the induced distribution is
/// nonincreasing in the codebook size, using common random numbers: the
/// size-(m+1) codebook extends the size-m codebook on the same stream.
pub fn fdivergence_monotonicity_check(
    ch: &DiscreteChannel,
    kind: FDivergenceKind,
    n: usize,
    m_max: usize,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityReport> {
    assert!(m_max >= 2, "need at least two codebook sizes");
    assert!(trials >= 2);
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| simulator::prefix_divergence_profile(ch, n, m_max, kind, seed, trial as u64))
        .collect::<Result<_>>()?;

    let mut means = Vec::with_capacity(m_max);
    for m in 0..m_max {
        let col: Vec<f64> = per_trial.iter().map(|row| row[m]).collect();
        means.push(col.iter().sum::<f64>() / trials as f64);
    }
    let mut step_diffs = Vec::with_capacity(m_max - 1);
    let mut nonincreasing = true;
    for m in 0..m_max - 1 {
        let diffs: Vec<f64> = per_trial.iter().map(|row| row[m] - row[m + 1]).collect();
        let (mean, stderr) = stats::mean_and_stderr(&diffs);
        // absolute floor: divergences that are zero up to rounding produce
        // diffs at 1e-16 scale with collapsing stderr
        if mean < -(4.0 * stderr + 1e-12) {
            nonincreasing = false;
        }
        step_diffs.push((mean, stderr));
    }
    Ok(MonotonicityReport {
        means,
        step_diffs,
        nonincreasing,
    })
}

/// Mode helper so `verify` can name the batch it drew (kept here to avoid a
/// stringly-typed check table).
pub fn mode_name(mode: SizeMode) -> &'static str {
    match mode {
        SizeMode::Fixed => "fixed",
        SizeMode::Poisson => "poisson",
    }
}
