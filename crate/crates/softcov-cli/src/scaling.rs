//! Scaling-law regression: least squares of `log E_n` on `(1, n, log n)`.
//!
//! The measured orders have the form `const * n^{c2} * exp(c1 n)`, so the
//! three regressors are exactly the functional form of the predictions; no
//! higher corrections are fitted. The per-n slope `c1` estimates minus the
//! exponent and the `log n` coefficient `c2` estimates the polynomial
//! prefactor power.

use crate::config::Target;
use crate::{CliError, CliResult};
use softcov::exponents::ExponentReport;
use softcov::simulator::TrialBatch;

/// Least-squares fit of `log mean` against `(1, n, log n)` with the
/// branch-dependent predictions attached.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub target: Target,
    pub n_grid: Vec<usize>,
    pub log_means: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub residual_rms: f64,
    /// Frobenius condition estimate of the 3x3 normal matrix.
    pub condition_number: f64,
    /// Minus the corresponding exponent.
    pub predicted_c1: f64,
    /// Branch-dependent polynomial power (0 at the endpoint branches).
    pub predicted_c2: f64,
}

/// Plain coefficients of the three-regressor fit.
#[derive(Debug, Clone, Copy)]
pub struct FitCoefficients {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub residual_rms: f64,
    pub condition_number: f64,
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    // Gaussian elimination with partial pivoting.
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col];
        for row in col + 1..3 {
            let f = a[row][col] / pivot_row[col];
            for (entry, pivot_entry) in a[row][col..3].iter_mut().zip(&pivot_row[col..3]) {
                *entry -= f * pivot_entry;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

fn inverse3(a: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut inv = [[0.0; 3]; 3];
    for col in 0..3 {
        let mut e = [0.0; 3];
        e[col] = 1.0;
        let x = solve3(a, e);
        for row in 0..3 {
            inv[row][col] = x[row];
        }
    }
    inv
}

fn frobenius(a: &[[f64; 3]; 3]) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Exact normal-equation solve of `y ~ c0 + c1 n + c2 log n`.
pub fn fit_log_linear(ns: &[f64], ys: &[f64]) -> CliResult<FitCoefficients> {
    if ns.len() != ys.len() || ns.len() < 4 {
        return Err(CliError::Config(format!(
            "scaling fit needs at least 4 grid points, got {}",
            ns.len()
        )));
    }
    let mut xtx = [[0.0f64; 3]; 3];
    let mut xty = [0.0f64; 3];
    for (&n, &y) in ns.iter().zip(ys) {
        let row = [1.0, n, n.ln()];
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += row[i] * row[j];
            }
            xty[i] += row[i] * y;
        }
    }
    let coef = solve3(xtx, xty);
    let condition_number = frobenius(&xtx) * frobenius(&inverse3(xtx));
    let mut ss = 0.0;
    for (&n, &y) in ns.iter().zip(ys) {
        let fitted = coef[0] + coef[1] * n + coef[2] * n.ln();
        ss += (y - fitted) * (y - fitted);
    }
    Ok(FitCoefficients {
        c0: coef[0],
        c1: coef[1],
        c2: coef[2],
        residual_rms: (ss / ns.len() as f64).sqrt(),
        condition_number,
    })
}

/// Fit measured batch means for `target` and attach the predictions from an
/// exponent report.
pub fn fit_batches(
    batches: &[TrialBatch],
    target: Target,
    report: &ExponentReport,
) -> CliResult<ScalingFit> {
    let mut ns = Vec::with_capacity(batches.len());
    let mut logs = Vec::with_capacity(batches.len());
    for b in batches {
        let mean = match target {
            Target::Kl => b.mean_kl,
            Target::Tv => b.mean_tv,
        };
        if mean <= 0.0 {
            return Err(CliError::NonPositiveMean { n: b.n, mean });
        }
        ns.push(b.n as f64);
        logs.push(mean.ln());
    }
    let coeffs = fit_log_linear(&ns, &logs)?;
    let (predicted_c1, predicted_c2) = match target {
        Target::Kl => (-report.kl_exponent, report.predicted_kl_log_coefficient()),
        Target::Tv => (-report.tv_exponent, report.predicted_tv_log_coefficient()),
    };
    Ok(ScalingFit {
        target,
        n_grid: batches.iter().map(|b| b.n).collect(),
        log_means: logs,
        c0: coeffs.c0,
        c1: coeffs.c1,
        c2: coeffs.c2,
        residual_rms: coeffs.residual_rms,
        condition_number: coeffs.condition_number,
        predicted_c1,
        predicted_c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_synthetic_fit_is_exact() {
        // log E_n = 1 - 0.5 n - 0.5 log n
        let ns: Vec<f64> = (4..=12).map(|n| n as f64).collect();
        let ys: Vec<f64> = ns.iter().map(|&n| 1.0 - 0.5 * n - 0.5 * n.ln()).collect();
        let fit = fit_log_linear(&ns, &ys).unwrap();
        assert!((fit.c0 - 1.0).abs() < 1e-10, "c0 = {}", fit.c0);
        assert!((fit.c1 + 0.5).abs() < 1e-10, "c1 = {}", fit.c1);
        assert!((fit.c2 + 0.5).abs() < 1e-10, "c2 = {}", fit.c2);
        assert!(fit.residual_rms < 1e-10);
        assert!(fit.condition_number.is_finite() && fit.condition_number > 1.0);
    }

    #[test]
    fn too_few_points_is_rejected() {
        let ns = [4.0, 5.0, 6.0];
        let ys = [0.0, 0.1, 0.2];
        assert!(fit_log_linear(&ns, &ys).is_err());
    }

    #[test]
    fn non_positive_mean_is_rejected() {
        use softcov::channel::build_channel;
        use softcov::exponents::exponent_report;
        use softcov::simulator::SizeMode;

        let ch = build_channel(&[0.5, 0.5], &[vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let report = exponent_report(&ch, 0.55).unwrap();
        let batch = |n: usize, mean_kl: f64| TrialBatch {
            n,
            rate: 0.55,
            mode: SizeMode::Fixed,
            master_seed: 0,
            per_trial_m: vec![2, 2],
            per_trial_kl: vec![mean_kl, mean_kl],
            per_trial_tv: vec![0.1, 0.1],
            mean_kl,
            stderr_kl: 0.0,
            mean_tv: 0.1,
            stderr_tv: 0.0,
            zero_size_draws: 0,
            total_size_draws: 0,
        };
        let batches = vec![batch(4, 0.5), batch(5, 0.4), batch(6, 0.0), batch(7, 0.2)];
        match fit_batches(&batches, Target::Kl, &report) {
            Err(CliError::NonPositiveMean { n, .. }) => assert_eq!(n, 6),
            other => panic!("expected NonPositiveMean, got {other:?}"),
        }
    }
}
