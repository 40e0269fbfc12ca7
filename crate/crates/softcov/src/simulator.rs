//! Random-codebook simulation with exact divergence evaluation.
//!
//! Codebooks are drawn i.i.d. from `P_X^n` on deterministic per-trial
//! streams. For blocklengths with `|Y|^n <= 2^24` the induced output
//! distribution is computed exactly (the only randomness in a reported KL or
//! TV value is the codebook itself), by walking output sequences with a
//! mixed-radix odometer over per-symbol log-probabilities -- no materialized
//! list of sequences.
//!
//! The Poissonized machinery replaces the fixed codebook size by
//! `M ~ Poisson(mu_n)` with `mu_n = 2 exp(n rate)`, which decorrelates
//! codeword contributions: the normalized sum
//! `T = (1/mu_n) Sum_k exp(i(X(k); Y))` has unit mean and splits into
//! independent in-window / out-of-window parts.

use rayon::prelude::*;

use crate::channel::DiscreteChannel;
use crate::oracles::{FDivergenceKind, WindowEvent};
use crate::rng::{
    self, sample_index, stream_rng, PoissonSampler, STREAM_CODEBOOK, STREAM_OUTPUT, STREAM_SIZE,
};
use crate::stats;
use crate::{Error, Result};

/// Hard cap on the exactly-enumerated output space.
pub const OUTPUT_SPACE_CAP: u64 = 1 << 24;

/// How the per-trial codebook size is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeMode {
    /// `M_n = round(exp(n rate))`, identical across trials.
    Fixed,
    /// `M ~ Poisson(2 exp(n rate))` per trial, conditioned on `M >= 1`
    /// for divergence trials (the zero frequency is recorded separately).
    Poisson,
}

impl std::fmt::Display for SizeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SizeMode::Fixed => write!(f, "fixed"),
            SizeMode::Poisson => write!(f, "poisson"),
        }
    }
}

/// Poissonized mean codebook size `mu_n = 2 exp(n rate)`.
pub fn poisson_mean_size(n: usize, rate: f64) -> f64 {
    2.0 * (n as f64 * rate).exp()
}

pub use crate::exponents::fixed_codebook_size;

/// A sampled codebook: `size` codewords of `n` input symbols each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    pub n: usize,
    pub codewords: Vec<Vec<usize>>,
    pub seed: u64,
}

impl Codebook {
    pub fn size(&self) -> usize {
        self.codewords.len()
    }
}

/// Draw `size` codewords i.i.d. from `P_X^n` by inverse CDF on the stream
/// keyed by `seed`. Bit-identical across runs and thread counts.
pub fn sample_codebook(ch: &DiscreteChannel, n: usize, size: usize, seed: u64) -> Codebook {
    use rand::Rng;
    let cdf = ch.input_cdf();
    let mut rng = stream_rng(seed, STREAM_CODEBOOK, 0);
    let codewords = (0..size)
        .map(|_| (0..n).map(|_| sample_index(&cdf, rng.random())).collect())
        .collect();
    Codebook { n, codewords, seed }
}

/// Exact induced output distribution of a codebook, over all `|Y|^n` output
/// sequences enumerated in lexicographic (mixed-radix, first symbol most
/// significant) order.
#[derive(Debug, Clone)]
pub struct InducedDistribution {
    probabilities: Vec<f64>,
    n: usize,
    output_card: usize,
}

impl InducedDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn output_card(&self) -> usize {
        self.output_card
    }
}

fn check_output_space(ch: &DiscreteChannel, n: usize) -> Result<usize> {
    let card = ch.output_card() as u64;
    let mut total = 1u64;
    for _ in 0..n {
        total = total.saturating_mul(card);
        if total > OUTPUT_SPACE_CAP {
            return Err(Error::MemoryCap {
                card: ch.output_card(),
                n,
            });
        }
    }
    Ok(total as usize)
}

/// Walk all `|Y|^n` sequences in lexicographic order, calling
/// `f(index, log_prob)` where `log_prob = Sum_i rows[i][y_i]`. Prefix sums
/// are maintained incrementally, so the walk is O(|Y|^n) amortized.
fn for_each_sequence_logprob(rows: &[&[f64]], output_card: usize, mut f: impl FnMut(usize, f64)) {
    let n = rows.len();
    let mut digits = vec![0usize; n];
    let mut prefix = vec![0.0f64; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + rows[i][0];
    }
    let mut idx = 0usize;
    loop {
        f(idx, prefix[n]);
        idx += 1;
        // odometer increment, least-significant digit last
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < output_card {
                break;
            }
            digits[pos] = 0;
        }
        for j in pos..n {
            prefix[j + 1] = prefix[j] + rows[j][digits[j]];
        }
    }
}

/// Exact mixture `(1/M) Sum_k Prod_i P_{Y|X}(y_i | c_k,i)` over all output
/// sequences. Per-sequence terms are exponentiated from per-symbol
/// log-probabilities and accumulated in probability domain.
pub fn induced_distribution(ch: &DiscreteChannel, cb: &Codebook) -> Result<InducedDistribution> {
    if cb.size() == 0 {
        return Err(Error::EmptyCodebook);
    }
    let total = check_output_space(ch, cb.n)?;
    let mut probs = vec![0.0f64; total];
    let log_rows: Vec<Vec<f64>> = (0..ch.input_card())
        .map(|x| {
            (0..ch.output_card())
                .map(|y| ch.log_transition_prob(x, y))
                .collect()
        })
        .collect();
    for cw in &cb.codewords {
        let rows: Vec<&[f64]> = cw.iter().map(|&x| log_rows[x].as_slice()).collect();
        for_each_sequence_logprob(&rows, ch.output_card(), |idx, lp| {
            probs[idx] += lp.exp();
        });
    }
    let inv_m = 1.0 / cb.size() as f64;
    for p in probs.iter_mut() {
        *p *= inv_m;
    }
    debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    Ok(InducedDistribution {
        probabilities: probs,
        n: cb.n,
        output_card: ch.output_card(),
    })
}

/// Exact `D(induced || P_Y^n)` in nats (clamped at zero against rounding).
pub fn exact_kl(induced: &InducedDistribution, ch: &DiscreteChannel) -> Result<f64> {
    divergences(induced, ch).map(|(kl, _)| kl)
}

/// Exact half-L1 distance between the induced distribution and `P_Y^n`.
pub fn exact_tv(induced: &InducedDistribution, ch: &DiscreteChannel) -> Result<f64> {
    divergences(induced, ch).map(|(_, tv)| tv)
}

/// One pass computing both divergences against the product target.
pub fn divergences(induced: &InducedDistribution, ch: &DiscreteChannel) -> Result<(f64, f64)> {
    assert_eq!(induced.output_card, ch.output_card(), "channel mismatch");
    let log_q: Vec<f64> = (0..ch.output_card())
        .map(|y| ch.log_output_prob(y))
        .collect();
    let rows: Vec<&[f64]> = (0..induced.n).map(|_| log_q.as_slice()).collect();
    let mut kl = 0.0;
    let mut l1 = 0.0;
    let mut violation = 0.0f64;
    let probs = &induced.probabilities;
    for_each_sequence_logprob(&rows, ch.output_card(), |idx, lq| {
        let p = probs[idx];
        let q = lq.exp();
        l1 += (p - q).abs();
        if p > 0.0 {
            if lq == f64::NEG_INFINITY {
                violation += p;
            } else {
                kl += p * (p.ln() - lq);
            }
        }
    });
    if violation > 0.0 {
        // impossible for channels validated at construction; kept as a
        // guard for hand-built inputs
        return Err(Error::AbsoluteContinuity { mass: violation });
    }
    Ok((kl.max(0.0), (0.5 * l1).clamp(0.0, 1.0)))
}

/// Per-trial exact divergences of random codebooks, with their summary
/// statistics and full seed provenance.
#[derive(Debug, Clone)]
pub struct TrialBatch {
    pub n: usize,
    pub rate: f64,
    pub mode: SizeMode,
    pub master_seed: u64,
    pub per_trial_m: Vec<u64>,
    pub per_trial_kl: Vec<f64>,
    pub per_trial_tv: Vec<f64>,
    pub mean_kl: f64,
    pub stderr_kl: f64,
    pub mean_tv: f64,
    pub stderr_tv: f64,
    /// Rejected `M = 0` draws in poisson mode (divergences condition on
    /// `M >= 1`; the zero mass `exp(-mu_n)` is recorded, not simulated).
    pub zero_size_draws: u64,
    /// Total Poisson draws including rejected zeros.
    pub total_size_draws: u64,
}

impl TrialBatch {
    pub fn trials(&self) -> usize {
        self.per_trial_kl.len()
    }

    /// Observed frequency of `M = 0` among all Poisson size draws.
    pub fn zero_size_frequency(&self) -> f64 {
        if self.total_size_draws == 0 {
            0.0
        } else {
            self.zero_size_draws as f64 / self.total_size_draws as f64
        }
    }
}

/// Soft-covering estimate gated on `rate > I(X;Y)`, the regime where the
/// exponent theory applies.
pub fn estimate_soft_covering(
    ch: &DiscreteChannel,
    n: usize,
    rate: f64,
    trials: usize,
    mode: SizeMode,
    master_seed: u64,
) -> Result<TrialBatch> {
    let mi = ch.mutual_information();
    if rate.is_nan() || rate <= mi {
        return Err(Error::RateBelowMi { rate, mi });
    }
    soft_covering_batch(ch, n, rate, trials, mode, master_seed)
}

/// Ungated batch runner; bound-domination checks use it at rates below the
/// mutual information, where the one-shot bounds still hold.
pub fn soft_covering_batch(
    ch: &DiscreteChannel,
    n: usize,
    rate: f64,
    trials: usize,
    mode: SizeMode,
    master_seed: u64,
) -> Result<TrialBatch> {
    assert!(trials >= 2, "need at least two trials");
    check_output_space(ch, n)?;
    let fixed_m = fixed_codebook_size(n, rate);
    let mu = poisson_mean_size(n, rate);

    let rows: Vec<(u64, f64, f64, u64, u64)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial = trial as u64;
            let (m, zeros, draws) = match mode {
                SizeMode::Fixed => (fixed_m, 0, 0),
                SizeMode::Poisson => {
                    let mut sampler = PoissonSampler::new(mu);
                    let mut size_rng = stream_rng(master_seed, STREAM_SIZE, trial);
                    let (m, zeros) = sampler.sample_positive(&mut size_rng);
                    (m, zeros, zeros + 1)
                }
            };
            let cb = sample_codebook(
                ch,
                n,
                m as usize,
                rng::derive_seed(master_seed, STREAM_CODEBOOK, trial),
            );
            let induced = induced_distribution(ch, &cb)?;
            let (kl, tv) = divergences(&induced, ch)?;
            Ok((m, kl, tv, zeros, draws))
        })
        .collect::<Result<_>>()?;

    let per_trial_m: Vec<u64> = rows.iter().map(|r| r.0).collect();
    let per_trial_kl: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let per_trial_tv: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let zero_size_draws: u64 = rows.iter().map(|r| r.3).sum();
    let total_size_draws: u64 = rows.iter().map(|r| r.4).sum();
    let (mean_kl, stderr_kl) = stats::mean_and_stderr(&per_trial_kl);
    let (mean_tv, stderr_tv) = stats::mean_and_stderr(&per_trial_tv);
    Ok(TrialBatch {
        n,
        rate,
        mode,
        master_seed,
        per_trial_m,
        per_trial_kl,
        per_trial_tv,
        mean_kl,
        stderr_kl,
        mean_tv,
        stderr_tv,
        zero_size_draws,
        total_size_draws,
    })
}

/// One draw of the Poissonized codebook sum
/// `T = (1/mu_n) Sum_{k<=M} exp(i(X(k); Y))` and its split into the
/// in-window part `t1` and the remainder `t2`.
#[derive(Debug, Clone, Copy)]
pub struct TStatisticSample {
    pub t: f64,
    pub t1: f64,
    pub t2: f64,
    pub m: u64,
    pub codebook_seed: u64,
    pub y_seed: u64,
}

/// Draws `M ~ Poisson(mu_n)`, a codebook of that size, and `Y ~ P_Y^n`, then
/// evaluates the normalized codebook sum. The optional window splits each
/// codeword's contribution by its density sum `i(X(k); Y)`; without a window
/// everything lands in `t1`.
pub fn sample_t_statistic(
    ch: &DiscreteChannel,
    n: usize,
    rate: f64,
    window: Option<&WindowEvent>,
    codebook_seed: u64,
    y_seed: u64,
) -> TStatisticSample {
    use rand::Rng;
    assert!(rate > 0.0);
    let mu = poisson_mean_size(n, rate);
    let mut sampler = PoissonSampler::new(mu);
    let mut cb_rng = stream_rng(codebook_seed, STREAM_SIZE, 0);
    let m = sampler.sample(&mut cb_rng);

    let out_cdf = ch.output_cdf();
    let mut y_rng = stream_rng(y_seed, STREAM_OUTPUT, 0);
    let y: Vec<usize> = (0..n)
        .map(|_| sample_index(&out_cdf, y_rng.random()))
        .collect();

    let in_cdf = ch.input_cdf();
    let mut cw_rng = stream_rng(codebook_seed, STREAM_CODEBOOK, 0);
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    for _ in 0..m {
        let mut dsum = 0.0;
        for &yi in &y {
            let x = sample_index(&in_cdf, cw_rng.random());
            dsum += ch.information_density(x, yi);
        }
        let contribution = dsum.exp() / mu; // exp(-inf) = 0
        match window {
            Some(w) if !w.contains(dsum) => t2 += contribution,
            _ => t1 += contribution,
        }
    }
    TStatisticSample {
        t: t1 + t2,
        t1,
        t2,
        m,
        codebook_seed,
        y_seed,
    }
}

/// Monte Carlo means of `T log T` and `|T - 1|` (with `0 log 0 = 0`).
#[derive(Debug, Clone, Copy)]
pub struct TFunctionals {
    pub mean_t_log_t: f64,
    pub stderr_t_log_t: f64,
    pub mean_abs_t_minus_one: f64,
    pub stderr_abs_t_minus_one: f64,
    pub trials: usize,
}

pub fn estimate_t_functionals(
    ch: &DiscreteChannel,
    n: usize,
    rate: f64,
    trials: usize,
    master_seed: u64,
) -> TFunctionals {
    assert!(trials >= 2);
    let samples: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial = trial as u64;
            let s = sample_t_statistic(
                ch,
                n,
                rate,
                None,
                rng::derive_seed(master_seed, STREAM_CODEBOOK, trial),
                rng::derive_seed(master_seed, STREAM_OUTPUT, trial),
            );
            let tlogt = if s.t > 0.0 { s.t * s.t.ln() } else { 0.0 };
            (tlogt, (s.t - 1.0).abs())
        })
        .collect();
    let f1: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let f2: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let (mean_t_log_t, stderr_t_log_t) = stats::mean_and_stderr(&f1);
    let (mean_abs_t_minus_one, stderr_abs_t_minus_one) = stats::mean_and_stderr(&f2);
    TFunctionals {
        mean_t_log_t,
        stderr_t_log_t,
        mean_abs_t_minus_one,
        stderr_abs_t_minus_one,
        trials,
    }
}

/// Empirical independence check of the window split `(T1, T2)` at a fixed
/// output sequence.
#[derive(Debug, Clone, Copy)]
pub struct ThinningReport {
    pub pearson_r: f64,
    pub chi_square_p: f64,
    pub samples: usize,
    /// True when one side of the split is constant (e.g. the window covers
    /// the whole space, or the channel leaves a single density value per
    /// output); the chi-square table cannot be formed and independence holds
    /// trivially, so `chi_square_p` is reported as 1.
    pub skipped_constant_split: bool,
    /// True when quantile bins collapsed and the contingency table had to be
    /// reduced; reported, not fatal.
    pub degenerate_bins: bool,
}

/// Over repeated `(M, codebook)` draws with `Y` fixed at `y`, measures the
/// Pearson correlation of `(T1, T2)` and a chi-square independence p-value
/// on a 4x4 quantile binning.
pub fn thinning_independence_check(
    ch: &DiscreteChannel,
    n: usize,
    rate: f64,
    y: &[usize],
    window: &WindowEvent,
    samples: usize,
    seed: u64,
) -> Result<ThinningReport> {
    assert_eq!(y.len(), n);
    assert!(samples >= 2);
    for &yi in y {
        if yi >= ch.output_card() {
            return Err(Error::DimensionMismatch(format!(
                "output symbol {yi} out of range"
            )));
        }
    }
    use rand::Rng;
    let mu = poisson_mean_size(n, rate);
    let in_cdf = ch.input_cdf();
    // density of each input symbol against the fixed output position
    let density: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..ch.input_card())
                .map(|x| ch.information_density(x, y[i]))
                .collect()
        })
        .collect();

    let pairs: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|trial| {
            let trial = trial as u64;
            let mut sampler = PoissonSampler::new(mu);
            let mut size_rng = stream_rng(seed, STREAM_SIZE, trial);
            let m = sampler.sample(&mut size_rng);
            let mut cw_rng = stream_rng(seed, STREAM_CODEBOOK, trial);
            let mut t1 = 0.0;
            let mut t2 = 0.0;
            for _ in 0..m {
                let mut dsum = 0.0;
                for pos_density in &density {
                    let x = sample_index(&in_cdf, cw_rng.random());
                    dsum += pos_density[x];
                }
                let contribution = dsum.exp() / mu;
                if window.contains(dsum) {
                    t1 += contribution;
                } else {
                    t2 += contribution;
                }
            }
            (t1, t2)
        })
        .collect();

    let t1s: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let t2s: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if constant(&t1s) || constant(&t2s) {
        return Ok(ThinningReport {
            pearson_r: 0.0,
            chi_square_p: 1.0,
            samples,
            skipped_constant_split: true,
            degenerate_bins: true,
        });
    }
    let r = stats::pearson(&t1s, &t2s);
    let test = stats::chi_square_independence(&t1s, &t2s);
    Ok(ThinningReport {
        pearson_r: r,
        chi_square_p: test.p_value,
        samples,
        skipped_constant_split: false,
        degenerate_bins: test.degenerate,
    })
}

/// Per-trial divergence profile across nested codebook prefixes
/// `1..=m_max` on common random numbers; backs the monotonicity check.
pub(crate) fn prefix_divergence_profile(
    ch: &DiscreteChannel,
    n: usize,
    m_max: usize,
    kind: FDivergenceKind,
    seed: u64,
    trial: u64,
) -> Result<Vec<f64>> {
    let total = check_output_space(ch, n)?;
    let cb = sample_codebook(ch, n, m_max, rng::derive_seed(seed, STREAM_CODEBOOK, trial));
    let log_rows: Vec<Vec<f64>> = (0..ch.input_card())
        .map(|x| {
            (0..ch.output_card())
                .map(|y| ch.log_transition_prob(x, y))
                .collect()
        })
        .collect();

    let mut mixture = vec![0.0f64; total];
    let mut cw_prob = vec![0.0f64; total];
    let mut values = Vec::with_capacity(m_max);
    for (m, cw) in cb.codewords.iter().enumerate() {
        let rows: Vec<&[f64]> = cw.iter().map(|&x| log_rows[x].as_slice()).collect();
        for_each_sequence_logprob(&rows, ch.output_card(), |idx, lp| {
            cw_prob[idx] = lp.exp();
        });
        let m_new = (m + 1) as f64;
        for (mix, &p) in mixture.iter_mut().zip(&cw_prob) {
            *mix = (*mix * m as f64 + p) / m_new;
        }
        let induced = InducedDistribution {
            probabilities: mixture.clone(),
            n,
            output_card: ch.output_card(),
        };
        let (kl, tv) = divergences(&induced, ch)?;
        values.push(match kind {
            FDivergenceKind::Kl => kl,
            FDivergenceKind::Tv => tv,
        });
    }
    Ok(values)
}
