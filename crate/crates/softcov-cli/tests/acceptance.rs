//! Acceptance suite: one test per criterion, each printing its measured
//! values. Campaigns shared between criteria are computed once.

use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;

use softcov::channel::{build_channel, DiscreteChannel};
use softcov::exponents::{
    self, exponent_report, gallager_tv_bound, hayashi_kl_upper_exact, solve_rho_star,
    solve_tau_star, z_statistics, ExponentReport,
};
use softcov::oracles::{
    berry_esseen_exponential_bound_check, fdivergence_monotonicity_check, tv_moment_lower_bound,
    u_logu_lower_bound, DensitySumDistribution, FDivergenceKind, WindowEvent,
};
use softcov::rng::{derive_seed, stream_rng, PoissonSampler, STREAM_AUX};
use softcov::simulator::{
    estimate_soft_covering, fixed_codebook_size, induced_distribution, sample_t_statistic,
    soft_covering_batch, thinning_independence_check, Codebook, SizeMode, TrialBatch,
};
use softcov_cli::config::Target;
use softcov_cli::scaling::{fit_batches, ScalingFit};

fn bsc(eps: f64) -> DiscreteChannel {
    build_channel(&[0.5, 0.5], &[vec![1.0 - eps, eps], vec![eps, 1.0 - eps]]).unwrap()
}

fn bec(eps: f64) -> DiscreteChannel {
    build_channel(
        &[0.5, 0.5],
        &[vec![1.0 - eps, eps, 0.0], vec![0.0, eps, 1.0 - eps]],
    )
    .unwrap()
}

fn identity2() -> DiscreteChannel {
    build_channel(&[0.5, 0.5], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
}

/// Trial schedule for the scaling campaigns: at least 500 at the largest
/// blocklength, doubling every two steps down.
fn scaling_trials(n: usize, n_max: usize, floor: usize) -> usize {
    let factor = 2f64.powf((n_max - n) as f64 / 2.0);
    (floor as f64 * factor).round() as usize
}

struct Campaign {
    batches: Vec<TrialBatch>,
    report: ExponentReport,
}

fn run_scaling_campaign(
    ch: &DiscreteChannel,
    rate: f64,
    n_grid: &[usize],
    floor: usize,
    seed: u64,
) -> Campaign {
    let n_max = *n_grid.iter().max().unwrap();
    let batches = n_grid
        .iter()
        .map(|&n| {
            estimate_soft_covering(
                ch,
                n,
                rate,
                scaling_trials(n, n_max, floor),
                SizeMode::Fixed,
                seed,
            )
            .unwrap()
        })
        .collect();
    Campaign {
        batches,
        report: exponent_report(ch, rate).unwrap(),
    }
}

/// Criteria 1-3 share this campaign: BSC(0.1), R = 0.55, n = 4..=12.
fn bsc_campaign() -> &'static Campaign {
    static CAMPAIGN: OnceLock<Campaign> = OnceLock::new();
    CAMPAIGN.get_or_init(|| {
        let grid: Vec<usize> = (4..=12).collect();
        run_scaling_campaign(&bsc(0.1), 0.55, &grid, 600, 0x5c01)
    })
}

/// Criterion 4: BEC(0.3), R = 0.5, TV target.
fn bec_campaign() -> &'static Campaign {
    static CAMPAIGN: OnceLock<Campaign> = OnceLock::new();
    CAMPAIGN.get_or_init(|| {
        let grid: Vec<usize> = (4..=10).collect();
        run_scaling_campaign(&bec(0.3), 0.5, &grid, 500, 0x5c02)
    })
}

/// Criteria 5-6 share the bound-domination batches:
/// channels x n in 1..=6 x R in {0.5, 0.8}, 10^4 trials each.
struct DominationCell {
    channel_name: &'static str,
    channel: DiscreteChannel,
    n: usize,
    rate: f64,
    batch: TrialBatch,
}

fn domination_grid() -> &'static Vec<DominationCell> {
    static GRID: OnceLock<Vec<DominationCell>> = OnceLock::new();
    GRID.get_or_init(|| {
        let channels = [
            ("identity", identity2()),
            ("bsc(0.1)", bsc(0.1)),
            ("bec(0.3)", bec(0.3)),
        ];
        let mut cells = Vec::new();
        for (name, ch) in channels {
            for n in 1..=6usize {
                for rate in [0.5, 0.8] {
                    let batch =
                        soft_covering_batch(&ch, n, rate, 10_000, SizeMode::Fixed, 0x0d0c).unwrap();
                    cells.push(DominationCell {
                        channel_name: name,
                        channel: ch.clone(),
                        n,
                        rate,
                        batch,
                    });
                }
            }
        }
        cells
    })
}

fn print_fit(label: &str, fit: &ScalingFit) {
    println!(
        "{label}: c1 = {:+.6} (predicted {:+.6}), c2 = {:+.4} (predicted {:+.4}), rms {:.4e}, cond {:.3e}",
        fit.c1, fit.predicted_c1, fit.c2, fit.predicted_c2, fit.residual_rms, fit.condition_number
    );
}

#[test]
fn criterion_01_kl_exponent_recovery() {
    let campaign = bsc_campaign();
    let fit = fit_batches(&campaign.batches, Target::Kl, &campaign.report).unwrap();
    print_fit("criterion 1 (kl)", &fit);
    let err = (fit.c1 + campaign.report.kl_exponent).abs();
    assert!(
        err <= 0.10 * campaign.report.kl_exponent,
        "fitted c1 {:+.6} vs -kl_exponent {:+.6}: |error| {:.6} exceeds 10% of {:.6}",
        fit.c1,
        -campaign.report.kl_exponent,
        err,
        campaign.report.kl_exponent
    );
}

#[test]
fn criterion_02_tv_exponent_recovery() {
    let campaign = bsc_campaign();
    let fit = fit_batches(&campaign.batches, Target::Tv, &campaign.report).unwrap();
    print_fit("criterion 2 (tv)", &fit);
    let err = (fit.c1 + campaign.report.tv_exponent).abs();
    assert!(
        err <= 0.10 * campaign.report.tv_exponent,
        "fitted c1 {:+.6} vs -tv_exponent {:+.6}: |error| {:.6} exceeds 10% of {:.6}",
        fit.c1,
        -campaign.report.tv_exponent,
        err,
        campaign.report.tv_exponent
    );
}

#[test]
fn criterion_03_prefactor_sanity() {
    // Soft check: the log n regressor is weakly identified at n <= 12, so a
    // miss triggers one rerun with the grid extended to n = 14 before the
    // verdict.
    let campaign = bsc_campaign();
    let within = |fit: &ScalingFit| (fit.c2 - fit.predicted_c2).abs() <= 0.5;

    let kl_fit = fit_batches(&campaign.batches, Target::Kl, &campaign.report).unwrap();
    let tv_fit = fit_batches(&campaign.batches, Target::Tv, &campaign.report).unwrap();
    print_fit("criterion 3 (kl)", &kl_fit);
    print_fit("criterion 3 (tv)", &tv_fit);

    let mut kl_ok = within(&kl_fit);
    let mut tv_ok = within(&tv_fit);
    if !kl_ok || !tv_ok {
        println!("criterion 3: rerunning with the grid extended to n = 14");
        let ch = bsc(0.1);
        let grid: Vec<usize> = (4..=14).collect();
        let extended = run_scaling_campaign(&ch, 0.55, &grid, 400, 0x5c03);
        if !kl_ok {
            let fit = fit_batches(&extended.batches, Target::Kl, &extended.report).unwrap();
            print_fit("criterion 3 (kl, n<=14)", &fit);
            kl_ok = within(&fit);
        }
        if !tv_ok {
            let fit = fit_batches(&extended.batches, Target::Tv, &extended.report).unwrap();
            print_fit("criterion 3 (tv, n<=14)", &fit);
            tv_ok = within(&fit);
        }
    }
    assert!(kl_ok, "kl log-n coefficient outside +-0.5 after rerun");
    assert!(tv_ok, "tv log-n coefficient outside +-0.5 after rerun");
}

#[test]
fn criterion_04_singular_branch_prefactor() {
    let campaign = bec_campaign();
    let fit = fit_batches(&campaign.batches, Target::Tv, &campaign.report).unwrap();
    print_fit("criterion 4 (bec tv)", &fit);
    assert_eq!(campaign.report.beta_star, 1.0);
    assert_eq!(fit.predicted_c2, -0.5);
    assert!(
        (fit.c2 - fit.predicted_c2).abs() <= 0.5,
        "fitted c2 {:+.4} outside +-0.5 of -0.5",
        fit.c2
    );
}

#[test]
fn criterion_05_one_shot_bound_domination() {
    for cell in domination_grid() {
        let m = fixed_codebook_size(cell.n, cell.rate);
        let bound = gallager_tv_bound(&cell.channel, cell.n, m);
        let limit = bound + 3.0 * cell.batch.stderr_tv;
        println!(
            "criterion 5: {} n={} R={}: mean_tv {:.5} <= bound {:.5} + 3se",
            cell.channel_name, cell.n, cell.rate, cell.batch.mean_tv, bound
        );
        assert!(
            cell.batch.mean_tv <= limit,
            "{} n={} R={}: mean_tv {} exceeds {}",
            cell.channel_name,
            cell.n,
            cell.rate,
            cell.batch.mean_tv,
            limit
        );
    }
}

#[test]
fn criterion_06_mixture_kl_bound_domination() {
    for cell in domination_grid() {
        let bound = hayashi_kl_upper_exact(&cell.channel, cell.n, cell.rate).unwrap();
        let limit = bound + 3.0 * cell.batch.stderr_kl;
        assert!(
            cell.batch.mean_kl <= limit,
            "{} n={} R={}: mean_kl {} exceeds exact bound {} + 3se",
            cell.channel_name,
            cell.n,
            cell.rate,
            cell.batch.mean_kl,
            limit
        );
    }
    // the n = 3 convolution value must equal full sequence enumeration
    for (ch, rate) in [(bsc(0.1), 0.55), (identity2(), 0.8)] {
        let m = fixed_codebook_size(3, rate) as f64;
        let mut expect = 0.0;
        for xs in 0..8usize {
            for ys in 0..8usize {
                let mut p = 1.0;
                let mut dsum = 0.0;
                for i in 0..3 {
                    let x = (xs >> i) & 1;
                    let y = (ys >> i) & 1;
                    p *= ch.input_dist()[x] * ch.transition_prob(x, y);
                    dsum += ch.information_density(x, y);
                }
                if p > 0.0 {
                    expect += p * (1.0 + dsum.exp() / m).ln();
                }
            }
        }
        let dp = hayashi_kl_upper_exact(&ch, 3, rate).unwrap();
        println!("criterion 6: n=3 DP {dp:.15} vs enumeration {expect:.15}");
        assert!((dp - expect).abs() < 1e-12);
    }
}

#[test]
fn criterion_07_inequality_suites() {
    // moment lower bounds over 10^5 random finite-support laws each
    let mut rng = stream_rng(0xacce1, STREAM_AUX, 0);
    for _ in 0..100_000 {
        let k = 2 + (rng.random::<f64>() * 5.0) as usize;
        let mut values: Vec<f64> = (0..k).map(|_| 0.01 + 4.99 * rng.random::<f64>()).collect();
        let mut probs: Vec<f64> = (0..k).map(|_| 0.01 + rng.random::<f64>()).collect();
        let mass: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= mass);
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
        assert!(u_logu_lower_bound(m2, m3).unwrap() <= exact + 1e-12);
    }
    let mut rng = stream_rng(0xacce2, STREAM_AUX, 0);
    for _ in 0..100_000 {
        let k = 2 + (rng.random::<f64>() * 5.0) as usize;
        let values: Vec<f64> = (0..k).map(|_| 10.0 * rng.random::<f64>()).collect();
        let mut probs: Vec<f64> = (0..k).map(|_| 0.01 + rng.random::<f64>()).collect();
        let mass: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= mass);
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
        if v2 > 0.0 {
            assert!(tv_moment_lower_bound(v2, v4).unwrap() <= exact + 1e-12);
        }
    }

    // exponential tail envelope on the full grid
    let coin = DensitySumDistribution::from_atoms(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
    let ch = bsc(0.1);
    let mi = ch.mutual_information();
    let centered: Vec<(f64, f64)> = ch
        .density_atoms()
        .iter()
        .map(|&(v, p)| (v - mi, p))
        .collect();
    let channel_base = DensitySumDistribution::from_atoms(&centered).unwrap();
    for base in [&coin, &channel_base] {
        for n in [4usize, 16, 64] {
            for a in [0.0, 0.5 * (n as f64).ln()] {
                let (exact, bound) = berry_esseen_exponential_bound_check(base, n, a).unwrap();
                assert!(exact <= bound + 1e-15, "n={n}, A={a}: {exact} > {bound}");
            }
        }
    }

    // integral identity behind the u log u bound, by adaptive quadrature
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn adaptive(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let l = simpson(f, a, m);
        let r = simpson(f, m, b);
        if depth == 0 || (l + r - whole).abs() <= 15.0 * tol {
            l + r + (l + r - whole) / 15.0
        } else {
            adaptive(f, a, m, l, tol / 2.0, depth - 1) + adaptive(f, m, b, r, tol / 2.0, depth - 1)
        }
    }
    for u in [0.1f64, 0.5, 2.0, 10.0] {
        let f = |t: f64| (1.0 - t) / (1.0 + t * (u - 1.0));
        let integral = adaptive(&f, 0.0, 1.0, simpson(&f, 0.0, 1.0), 1e-12, 40);
        let lhs = u * u.ln() + 1.0 - u;
        let rhs = (u - 1.0) * (u - 1.0) * integral;
        assert!((lhs - rhs).abs() < 1e-10, "u = {u}");
    }
}

#[test]
fn criterion_08_optimizer_grid_agreement() {
    // 50 random channels with Dirichlet(1,..,1) rows, |X|,|Y| <= 4
    let mut rng = stream_rng(0xacce8, STREAM_AUX, 0);
    let mut cases = Vec::new();
    for _ in 0..50 {
        let nx = 2 + (rng.random::<f64>() * 3.0) as usize;
        let ny = 2 + (rng.random::<f64>() * 3.0) as usize;
        fn dirichlet(rng: &mut impl Rng, k: usize) -> Vec<f64> {
            let raw: Vec<f64> = (0..k)
                .map(|_| -(rng.random::<f64>().max(1e-12).ln()))
                .collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|v| v / s).collect()
        }
        let input = dirichlet(&mut rng, nx);
        let rows: Vec<Vec<f64>> = (0..nx).map(|_| dirichlet(&mut rng, ny)).collect();
        let ch = match build_channel(&input, &rows) {
            Ok(ch) => ch,
            Err(_) => continue,
        };
        let mi = ch.mutual_information();
        if mi < 1e-3 {
            continue;
        }
        let rate = mi + 0.05 + 0.95 * rng.random::<f64>();
        cases.push((ch, rate));
    }
    assert!(cases.len() >= 40, "not enough valid random channels");

    cases.par_iter().for_each(|(ch, rate)| {
        let tau = solve_tau_star(ch, *rate).unwrap();
        if !tau.at_boundary {
            let resid = (exponents::tilted_density_mean(ch, tau.tau_star) - rate).abs();
            assert!(resid <= 1e-9, "tau stationarity residual {resid}");
        }
        let step = 1e-6;
        let m = (1.0 / step) as usize;
        let grid_tau = (0..=m)
            .into_par_iter()
            .map(|i| {
                let t = i as f64 * step;
                (t, t * rate - exponents::log_density_mgf(ch, t))
            })
            .reduce(
                || (0.0, f64::NEG_INFINITY),
                |a, b| if a.1 >= b.1 { a } else { b },
            )
            .0;
        assert!(
            (tau.tau_star - grid_tau).abs() < 1e-6,
            "tau {} vs grid {}",
            tau.tau_star,
            grid_tau
        );

        let rho = solve_rho_star(ch, *rate).unwrap();
        if !rho.at_boundary {
            let resid = (z_statistics(ch, rho.rho_star).mean_z - rate).abs();
            assert!(resid <= 1e-9, "rho stationarity residual {resid}");
        }
        let m = (0.5 / step) as usize;
        let grid_rho = (0..=m)
            .into_par_iter()
            .map(|i| {
                let r = (i as f64 * step).min(0.5);
                (r, r * rate - exponents::log_tilt_normalizer(ch, r))
            })
            .reduce(
                || (0.0, f64::NEG_INFINITY),
                |a, b| if a.1 >= b.1 { a } else { b },
            )
            .0;
        assert!(
            (rho.rho_star - grid_rho).abs() < 1e-6,
            "rho {} vs grid {}",
            rho.rho_star,
            grid_rho
        );
    });
}

#[test]
fn criterion_09_structural_checks() {
    let channels = [
        ("identity", identity2()),
        ("bsc", bsc(0.1)),
        ("bec", bec(0.3)),
    ];
    for (name, ch) in &channels {
        // order monotonicity of the Renyi-type mutual information
        let grid = [0.5, 0.8, 1.2, 1.5, 2.0, 3.0];
        let vals: Vec<f64> = grid
            .iter()
            .map(|&a| exponents::alpha_mutual_information(ch, a))
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] >= w[0] - 1e-10, "{name}: order monotonicity");
        }
        // midpoint convexity of the log tilt normalizer
        let g: Vec<f64> = (0..=25)
            .map(|i| exponents::log_tilt_normalizer(ch, i as f64 * 0.02))
            .collect();
        for w in g.windows(3) {
            assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-10, "{name}: convexity");
        }
        // increasing slope
        let h: Vec<f64> = (0..=25)
            .map(|i| z_statistics(ch, i as f64 * 0.02).mean_z)
            .collect();
        for w in h.windows(2) {
            assert!(w[1] >= w[0] - 1e-10, "{name}: slope monotonicity");
        }
    }
    assert!(bec(0.3).is_singular());
    assert!(!bsc(0.1).is_singular());
    assert!(identity2().is_singular());
}

#[test]
fn criterion_10_poissonized_machinery() {
    // unit mean of the normalized codebook sum
    let ch = bsc(0.1);
    let trials = 100_000usize;
    let ts: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            sample_t_statistic(
                &ch,
                2,
                0.6,
                None,
                derive_seed(0xacc10, 1, i as u64),
                derive_seed(0xacc10, 2, i as u64),
            )
            .t
        })
        .collect();
    let mean = ts.iter().sum::<f64>() / trials as f64;
    let var = ts.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (trials - 1) as f64;
    let stderr = (var / trials as f64).sqrt();
    println!("criterion 10: E[T] = {mean:.5} +- {stderr:.5}");
    assert!((mean - 1.0).abs() <= 4.0 * stderr);

    // window-split independence across 20 seeds
    let samples = 10_000usize;
    let mut p_failures = 0;
    for seed in 0..20u64 {
        let rep = thinning_independence_check(
            &ch,
            2,
            1.0,
            &[0, 1],
            &WindowEvent::at_least(0.0),
            samples,
            0xaa00 + seed,
        )
        .unwrap();
        assert!(
            rep.pearson_r.abs() <= 4.0 / (samples as f64).sqrt(),
            "seed {seed}: pearson {}",
            rep.pearson_r
        );
        if rep.chi_square_p <= 0.001 {
            p_failures += 1;
        }
    }
    println!("criterion 10: thinning p-value failures {p_failures}/20");
    assert!(
        p_failures <= 1,
        "chi-square p <= 0.001 in {p_failures}/20 seeds"
    );

    // tail frequencies under the Chernoff bases
    let eps_lower = 2f64.sqrt() * (-0.5f64).exp();
    let eps_upper = (0.5f64).exp() / 1.5f64.powf(1.5);
    for mu in [4.0f64, 8.0] {
        let mut sampler = PoissonSampler::new(mu);
        let mut rng = stream_rng(0xacc11, STREAM_AUX, mu as u64);
        let draws = 1_000_000usize;
        let mut below = 0usize;
        let mut above = 0usize;
        for _ in 0..draws {
            let m = sampler.sample(&mut rng) as f64;
            if m < mu / 2.0 {
                below += 1;
            }
            if m >= 1.5 * mu {
                above += 1;
            }
        }
        let f_below = below as f64 / draws as f64;
        let f_above = above as f64 / draws as f64;
        println!(
            "criterion 10: mu={mu}: P[M<mu/2] {f_below:.5} <= {:.5}, P[M>=1.5mu] {f_above:.5} <= {:.5}",
            eps_lower.powf(mu),
            eps_upper.powf(mu)
        );
        assert!(f_below <= eps_lower.powf(mu));
        assert!(f_above <= eps_upper.powf(mu));
    }
}

#[test]
fn criterion_11_monotonicity() {
    // exact enumeration: identity, n = 1, all 2^m codebooks
    let ch = identity2();
    let mut exact_means = Vec::new();
    for m in 1..=8usize {
        let mut total = 0.0;
        for bits in 0..(1u32 << m) {
            let codewords: Vec<Vec<usize>> =
                (0..m).map(|k| vec![((bits >> k) & 1) as usize]).collect();
            let cb = Codebook {
                n: 1,
                codewords,
                seed: 0,
            };
            let d = induced_distribution(&ch, &cb).unwrap();
            total += softcov::simulator::exact_kl(&d, &ch).unwrap();
        }
        exact_means.push(total / (1u64 << m) as f64);
    }
    println!("criterion 11: exact L_m = {exact_means:?}");
    for w in exact_means.windows(2) {
        assert!(w[1] < w[0], "exact means must be strictly decreasing");
    }

    // paired Monte Carlo on a crossover channel
    let rep = fdivergence_monotonicity_check(&bsc(0.1), FDivergenceKind::Kl, 2, 32, 5000, 0xacc12)
        .unwrap();
    assert!(rep.nonincreasing, "step diffs: {:?}", rep.step_diffs);
    let rep_tv =
        fdivergence_monotonicity_check(&bsc(0.1), FDivergenceKind::Tv, 2, 32, 5000, 0xacc12)
            .unwrap();
    assert!(rep_tv.nonincreasing);
}

#[test]
fn criterion_12_determinism_across_thread_counts() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_softcov");
    let channel = concat!(env!("CARGO_MANIFEST_DIR"), "/../../channels/bsc01.json");
    let run = |threads: &str, out: &str| {
        let status = Command::new(bin)
            .args([
                "simulate",
                "--channel",
                channel,
                "--rate",
                "0.55",
                "--n",
                "2,3",
                "--trials",
                "400",
                "--mode",
                "poisson",
                "--seed",
                "7",
                "--out",
                out,
            ])
            .env("SOFTCOV_THREADS", threads)
            .status()
            .expect("spawn softcov");
        assert!(status.success());
    };
    let dir = std::env::temp_dir().join(format!("softcov-det-{}", std::process::id()));
    let out1 = dir.join("t1");
    let out4 = dir.join("t4");
    run("1", out1.to_str().unwrap());
    run("4", out4.to_str().unwrap());
    for file in ["trials_n2.csv", "trials_n3.csv", "summary.csv"] {
        let a = std::fs::read(out1.join(file)).unwrap();
        let b = std::fs::read(out4.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between thread counts");
    }
    std::fs::remove_dir_all(&dir).ok();
}
