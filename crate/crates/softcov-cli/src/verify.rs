//! The `verify` subcommand: standalone inequality and consistency checks
//! aggregated from the oracle and simulator modules. This file introduces no
//! new math -- every check is a thin driver over a library operation, and
//! the `CHECK_OPERATIONS` table records which one (audited by test).

use rand::Rng;

use softcov::channel::DiscreteChannel;
use softcov::exponents::{gallager_tv_bound, hayashi_kl_upper_exact};
use softcov::oracles::{
    berry_esseen_exponential_bound_check, fdivergence_monotonicity_check, tv_moment_lower_bound,
    u_logu_lower_bound, DensitySumDistribution, FDivergenceKind, WindowEvent,
};
use softcov::rng::{stream_rng, STREAM_AUX};
use softcov::simulator::{soft_covering_batch, thinning_independence_check, SizeMode};

use crate::CliResult;

/// Outcome of a single named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Check name -> the library operations it drives.
pub const CHECK_OPERATIONS: &[(&str, &str)] = &[
    ("u_logu_moment_bound", "oracles::u_logu_lower_bound"),
    ("tv_moment_bound", "oracles::tv_moment_lower_bound"),
    (
        "berry_esseen_envelope",
        "oracles::berry_esseen_exponential_bound_check",
    ),
    ("kl_monotonicity", "oracles::fdivergence_monotonicity_check"),
    ("tv_monotonicity", "oracles::fdivergence_monotonicity_check"),
    (
        "thinning_independence",
        "simulator::thinning_independence_check",
    ),
    (
        "one_shot_tv_domination",
        "simulator::soft_covering_batch vs exponents::gallager_tv_bound",
    ),
    (
        "mixture_kl_domination",
        "simulator::soft_covering_batch vs exponents::hayashi_kl_upper_exact",
    ),
];

fn random_positive_distribution(rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
    let k = 2 + (rng.random::<f64>() * 5.0) as usize;
    let values: Vec<f64> = (0..k).map(|_| 0.01 + 4.99 * rng.random::<f64>()).collect();
    let mut probs: Vec<f64> = (0..k).map(|_| 0.01 + rng.random::<f64>()).collect();
    let mass: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= mass);
    (values, probs)
}

fn check_u_logu(seed: u64, sweeps: usize) -> CheckResult {
    let mut rng = stream_rng(seed, STREAM_AUX, 1);
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..sweeps {
        let (mut values, probs) = random_positive_distribution(&mut rng);
        let mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
        values.iter_mut().for_each(|v| *v /= mean);
        let m2: f64 = values
            .iter()
            .zip(&probs)
            .map(|(v, p)| p * (v - 1.0).powi(2))
            .sum();
        let m3: f64 = values
            .iter()
            .zip(&probs)
            .map(|(v, p)| p * (v - 1.0).powi(3))
            .sum();
        let exact: f64 = values.iter().zip(&probs).map(|(v, p)| p * v * v.ln()).sum();
        let bound = u_logu_lower_bound(m2, m3).expect("unit-mean moments");
        worst = worst.max(bound - exact);
    }
    CheckResult {
        name: "u_logu_moment_bound",
        pass: worst <= 1e-12,
        detail: format!("{sweeps} random unit-mean laws, worst bound-exact gap {worst:e}"),
    }
}

fn check_tv_moment(seed: u64, sweeps: usize) -> CheckResult {
    let mut rng = stream_rng(seed, STREAM_AUX, 2);
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..sweeps {
        let (values, probs) = random_positive_distribution(&mut rng);
        let mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
        let v2: f64 = values
            .iter()
            .zip(&probs)
            .map(|(v, p)| p * (v - mean).powi(2))
            .sum();
        let v4: f64 = values
            .iter()
            .zip(&probs)
            .map(|(v, p)| p * (v - mean).powi(4))
            .sum();
        let exact: f64 = values
            .iter()
            .zip(&probs)
            .map(|(v, p)| p * (v - mean).abs())
            .sum();
        if v2 == 0.0 {
            continue;
        }
        let bound = tv_moment_lower_bound(v2, v4).expect("positive moments");
        worst = worst.max(bound - exact);
    }
    CheckResult {
        name: "tv_moment_bound",
        pass: worst <= 1e-12,
        detail: format!("{sweeps} random laws, worst bound-exact gap {worst:e}"),
    }
}

fn check_berry_esseen(ch: &DiscreteChannel) -> CliResult<CheckResult> {
    let coin = DensitySumDistribution::from_atoms(&[(-1.0, 0.5), (1.0, 0.5)])?;
    let mut bases = vec![coin];
    let mi = ch.mutual_information();
    let centered: Vec<(f64, f64)> = ch
        .density_atoms()
        .iter()
        .map(|&(v, p)| (v - mi, p))
        .collect();
    let channel_base = DensitySumDistribution::from_atoms(&centered)?;
    if channel_base.variance() > 0.0 {
        bases.push(channel_base);
    }
    let mut pass = true;
    let mut worst = f64::NEG_INFINITY;
    for base in &bases {
        for n in [4usize, 16, 64] {
            for a in [0.0, 0.5 * (n as f64).ln()] {
                let (exact, bound) = berry_esseen_exponential_bound_check(base, n, a)?;
                worst = worst.max(exact - bound);
                if exact > bound + 1e-15 {
                    pass = false;
                }
            }
        }
    }
    Ok(CheckResult {
        name: "berry_esseen_envelope",
        pass,
        detail: format!(
            "{} bases x n in {{4,16,64}} x 2 thresholds, worst exact-bound gap {worst:e}",
            bases.len()
        ),
    })
}

fn check_monotonicity(
    ch: &DiscreteChannel,
    kind: FDivergenceKind,
    name: &'static str,
    seed: u64,
) -> CliResult<CheckResult> {
    let rep = fdivergence_monotonicity_check(ch, kind, 2, 16, 1500, seed)?;
    Ok(CheckResult {
        name,
        pass: rep.nonincreasing,
        detail: format!(
            "means at m=1..16 from {:.4e} to {:.4e}",
            rep.means.first().unwrap(),
            rep.means.last().unwrap()
        ),
    })
}

fn check_thinning(ch: &DiscreteChannel, seed: u64) -> CliResult<CheckResult> {
    // fixed output mixing the most and least likely symbols
    let argmax = (0..ch.output_card())
        .max_by(|&a, &b| {
            ch.output_marginal()[a]
                .partial_cmp(&ch.output_marginal()[b])
                .unwrap()
        })
        .unwrap();
    let argmin = (0..ch.output_card())
        .min_by(|&a, &b| {
            ch.output_marginal()[a]
                .partial_cmp(&ch.output_marginal()[b])
                .unwrap()
        })
        .unwrap();
    let samples = 10_000;
    let rep = thinning_independence_check(
        ch,
        2,
        1.0,
        &[argmax, argmin],
        &WindowEvent::at_least(0.0),
        samples,
        seed,
    )?;
    let r_ok = rep.pearson_r.abs() <= 4.0 / (samples as f64).sqrt();
    let p_ok = rep.chi_square_p > 0.001;
    Ok(CheckResult {
        name: "thinning_independence",
        pass: r_ok && p_ok,
        detail: format!(
            "pearson_r {:.4e}, chi_square_p {:.4}{}{}",
            rep.pearson_r,
            rep.chi_square_p,
            if rep.skipped_constant_split {
                ", constant split (skipped)"
            } else {
                ""
            },
            if rep.degenerate_bins {
                ", degenerate bins"
            } else {
                ""
            },
        ),
    })
}

fn check_one_shot_domination(ch: &DiscreteChannel, seed: u64) -> CliResult<CheckResult> {
    let mut pass = true;
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=4usize {
        for rate in [0.5, 0.8] {
            let batch = soft_covering_batch(ch, n, rate, 4000, SizeMode::Fixed, seed)?;
            let m = softcov::simulator::fixed_codebook_size(n, rate);
            let bound = gallager_tv_bound(ch, n, m);
            let slack = batch.mean_tv - bound - 3.0 * batch.stderr_tv;
            worst = worst.max(slack);
            if slack > 0.0 {
                pass = false;
            }
        }
    }
    Ok(CheckResult {
        name: "one_shot_tv_domination",
        pass,
        detail: format!("n in 1..=4, R in {{0.5, 0.8}}, worst mean-bound slack {worst:e}"),
    })
}

fn check_mixture_domination(ch: &DiscreteChannel, seed: u64) -> CliResult<CheckResult> {
    let mut pass = true;
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=4usize {
        for rate in [0.5, 0.8] {
            let batch = soft_covering_batch(ch, n, rate, 4000, SizeMode::Fixed, seed)?;
            let bound = hayashi_kl_upper_exact(ch, n, rate)?;
            let slack = batch.mean_kl - bound - 3.0 * batch.stderr_kl;
            worst = worst.max(slack);
            if slack > 0.0 {
                pass = false;
            }
        }
    }
    Ok(CheckResult {
        name: "mixture_kl_domination",
        pass,
        detail: format!("n in 1..=4, R in {{0.5, 0.8}}, worst mean-bound slack {worst:e}"),
    })
}

/// Run every check against one channel. Check failures are results, not
/// errors; hard errors (memory caps, invalid inputs) abort the run.
pub fn run_verify(ch: &DiscreteChannel, seed: u64) -> CliResult<Vec<CheckResult>> {
    Ok(vec![
        check_u_logu(seed, 100_000),
        check_tv_moment(seed, 100_000),
        check_berry_esseen(ch)?,
        check_monotonicity(ch, FDivergenceKind::Kl, "kl_monotonicity", seed)?,
        check_monotonicity(ch, FDivergenceKind::Tv, "tv_monotonicity", seed)?,
        check_thinning(ch, seed)?,
        check_one_shot_domination(ch, seed)?,
        check_mixture_domination(ch, seed)?,
    ])
}
