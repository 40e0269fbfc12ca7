//! Artifact formatting. Every float is emitted with 17 significant digits
//! so CSV and JSON outputs are byte-stable across runs.

use std::io::Write;
use std::path::Path;

use softcov::simulator::{fixed_codebook_size, TrialBatch};

use crate::{CliError, CliResult};

/// 17-significant-digit scientific notation.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    let mut file = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
}

/// Per-trial CSV: `n,rate,mode,trial,M,kl_nats,tv`.
pub fn write_trials_csv(path: &Path, batch: &TrialBatch) -> CliResult<()> {
    let mut out = String::with_capacity(64 * batch.trials() + 64);
    out.push_str("n,rate,mode,trial,M,kl_nats,tv\n");
    for trial in 0..batch.trials() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            batch.n,
            f17(batch.rate),
            batch.mode,
            trial,
            batch.per_trial_m[trial],
            f17(batch.per_trial_kl[trial]),
            f17(batch.per_trial_tv[trial]),
        ));
    }
    write_file(path, &out)
}

/// Summary CSV across blocklengths. `M` is the nominal fixed size
/// `round(exp(n rate))`; the induced rate `log(M)/n` is reported alongside.
pub fn write_summary_csv(path: &Path, batches: &[TrialBatch]) -> CliResult<()> {
    let mut out = String::new();
    out.push_str(
        "n,mean_kl,stderr_kl,mean_tv,stderr_tv,M,mode,induced_rate,trials,zero_size_frequency\n",
    );
    for b in batches {
        let m = fixed_codebook_size(b.n, b.rate);
        let induced_rate = (m as f64).ln() / b.n as f64;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            b.n,
            f17(b.mean_kl),
            f17(b.stderr_kl),
            f17(b.mean_tv),
            f17(b.stderr_tv),
            m,
            b.mode,
            f17(induced_rate),
            b.trials(),
            f17(b.zero_size_frequency()),
        ));
    }
    write_file(path, &out)
}

/// Scaling points CSV: one row per grid blocklength.
pub fn write_scaling_points_csv(
    path: &Path,
    batches: &[TrialBatch],
    target: crate::config::Target,
) -> CliResult<()> {
    let mut out = String::new();
    out.push_str("n,trials,M,mean,stderr,log_mean\n");
    for b in batches {
        let (mean, stderr) = match target {
            crate::config::Target::Kl => (b.mean_kl, b.stderr_kl),
            crate::config::Target::Tv => (b.mean_tv, b.stderr_tv),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            b.n,
            b.trials(),
            fixed_codebook_size(b.n, b.rate),
            f17(mean),
            f17(stderr),
            f17(mean.ln()),
        ));
    }
    write_file(path, &out)
}

/// Scaling fit CSV: a single data row of coefficients and predictions.
pub fn write_scaling_fit_csv(path: &Path, fit: &crate::scaling::ScalingFit) -> CliResult<()> {
    let mut out = String::new();
    out.push_str("c0,c1,c2,residual_rms,condition_number,predicted_c1,predicted_c2\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        f17(fit.c0),
        f17(fit.c1),
        f17(fit.c2),
        f17(fit.residual_rms),
        f17(fit.condition_number),
        f17(fit.predicted_c1),
        f17(fit.predicted_c2),
    ));
    write_file(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = f17(std::f64::consts::LN_2);
        // one mantissa digit + 16 fraction digits
        assert_eq!(s, "6.9314718055994529e-1");
        assert_eq!(f17(0.25), "2.5000000000000000e-1");
        assert_eq!(f17(1.0), "1.0000000000000000e0");
    }
}
