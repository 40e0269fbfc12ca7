//! Campaign running: per-blocklength simulation batches and their artifacts.
//!
//! Campaigns run blocklengths sequentially; within a blocklength, trials
//! parallelize on the simulator's per-trial streams, so every artifact is
//! byte-identical for a fixed `(config, seed)` regardless of thread count.

use std::path::PathBuf;

use softcov::exponents::exponent_report;
use softcov::simulator::{estimate_soft_covering, TrialBatch};

use crate::config::{ExperimentConfig, Target};
use crate::fmt;
use crate::scaling::{fit_batches, ScalingFit};
use crate::CliResult;

/// Run one batch per grid blocklength.
pub fn run_campaign(config: &ExperimentConfig) -> CliResult<Vec<TrialBatch>> {
    let mut batches = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let batch = estimate_soft_covering(
            &config.channel,
            n,
            config.rate,
            config.trials_for(n),
            config.mode,
            config.master_seed,
        )?;
        batches.push(batch);
    }
    Ok(batches)
}

/// Artifact paths produced by `simulate`.
pub struct SimulateArtifacts {
    pub per_n: Vec<PathBuf>,
    pub summary: PathBuf,
}

/// Write one per-trial CSV per blocklength plus the summary CSV.
pub fn write_simulate_artifacts(
    config: &ExperimentConfig,
    batches: &[TrialBatch],
) -> CliResult<SimulateArtifacts> {
    let mut per_n = Vec::with_capacity(batches.len());
    for batch in batches {
        let path = config.out_dir.join(format!("trials_n{}.csv", batch.n));
        fmt::write_trials_csv(&path, batch)?;
        per_n.push(path);
    }
    let summary = config.out_dir.join("summary.csv");
    fmt::write_summary_csv(&summary, batches)?;
    Ok(SimulateArtifacts { per_n, summary })
}

/// Campaign plus scaling fit for one target.
pub struct ScalingRun {
    pub batches: Vec<TrialBatch>,
    pub fit: ScalingFit,
}

pub fn run_scaling(config: &ExperimentConfig, target: Target) -> CliResult<ScalingRun> {
    let batches = run_campaign(config)?;
    let report = exponent_report(&config.channel, config.rate)?;
    let fit = fit_batches(&batches, target, &report)?;
    Ok(ScalingRun { batches, fit })
}

/// Write the scaling artifacts: per-point measurements and the fit row.
pub fn write_scaling_artifacts(
    config: &ExperimentConfig,
    run: &ScalingRun,
) -> CliResult<Vec<PathBuf>> {
    let points = config
        .out_dir
        .join(format!("scaling_points_{}.csv", run.fit.target));
    fmt::write_scaling_points_csv(&points, &run.batches, run.fit.target)?;
    let fitcsv = config
        .out_dir
        .join(format!("scaling_fit_{}.csv", run.fit.target));
    fmt::write_scaling_fit_csv(&fitcsv, &run.fit)?;
    Ok(vec![points, fitcsv])
}
