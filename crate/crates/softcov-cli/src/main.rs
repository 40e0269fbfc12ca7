//! `softcov`: soft-covering experiments on finite discrete memoryless
//! channels.
//!
//! Subcommands: `exponents` (tilted-measure exponent report as JSON),
//! `simulate` (Monte Carlo divergence batches as CSV), `scaling`
//! (log-scale regression of measured means against the predicted order),
//! and `verify` (inequality and consistency checks).
//!
//! Exit codes: 0 success, 1 check failure, 2 usage/validation error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use softcov::channel::load_channel;
use softcov::exponents::exponent_report;
use softcov::simulator::SizeMode;

use softcov_cli::config::{parse_n_grid, ExperimentConfig, Target};
use softcov_cli::fmt::f17;
use softcov_cli::report::exponent_report_json;
use softcov_cli::{runner, verify, CliResult};

#[derive(Parser)]
#[command(
    name = "softcov",
    version,
    about = "Soft-covering experiments on finite discrete memoryless channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// M_n = round(exp(n rate)), identical across trials.
    Fixed,
    /// M ~ Poisson(2 exp(n rate)) per trial.
    Poisson,
}

impl From<ModeArg> for SizeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fixed => SizeMode::Fixed,
            ModeArg::Poisson => SizeMode::Poisson,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Kl,
    Tv,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Kl => Target::Kl,
            TargetArg::Tv => Target::Tv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the exponent report for a channel and rate as flat JSON.
    Exponents {
        /// Channel spec file: {"input_dist": [..], "transition": [[..], ..]}.
        #[arg(long)]
        channel: PathBuf,
        /// Codebook rate in nats; must exceed the mutual information.
        #[arg(long)]
        rate: f64,
    },
    /// Run Monte Carlo divergence batches and write CSV artifacts.
    Simulate {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        rate: f64,
        /// Comma-separated blocklengths, e.g. 4,5,6.
        #[arg(long)]
        n: String,
        /// Trials per blocklength (>= 100); default max(200, 20000/2^n).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum, default_value = "fixed")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for CSV artifacts.
        #[arg(long, default_value = "softcov-out")]
        out: PathBuf,
    },
    /// Fit log measured means against (1, n, log n) and compare with the
    /// predicted exponent and prefactor power.
    Scaling {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        n: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum, default_value = "fixed")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, default_value = "softcov-out")]
        out: PathBuf,
    },
    /// Run the inequality and consistency check suite against a channel.
    Verify {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn init_threads() {
    if let Ok(spec) = std::env::var("SOFTCOV_THREADS") {
        if let Ok(threads) = spec.parse::<usize>() {
            if threads >= 1 {
                // ignore failure: the pool may already be initialized
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn cmd_exponents(channel: &std::path::Path, rate: f64) -> CliResult<()> {
    let ch = load_channel(channel)?;
    let report = exponent_report(&ch, rate)?;
    println!("{}", exponent_report_json(&ch, &report));
    Ok(())
}

fn cmd_simulate(config: &ExperimentConfig) -> CliResult<()> {
    let batches = runner::run_campaign(config)?;
    let artifacts = runner::write_simulate_artifacts(config, &batches)?;
    for b in &batches {
        println!(
            "n={} trials={} mean_kl={} stderr_kl={} mean_tv={} stderr_tv={}",
            b.n,
            b.trials(),
            f17(b.mean_kl),
            f17(b.stderr_kl),
            f17(b.mean_tv),
            f17(b.stderr_tv)
        );
    }
    println!("wrote {}", artifacts.summary.display());
    Ok(())
}

fn cmd_scaling(config: &ExperimentConfig, target: Target) -> CliResult<()> {
    let run = runner::run_scaling(config, target)?;
    let fit = &run.fit;
    println!("target = {}", fit.target);
    println!("n grid = {:?}", fit.n_grid);
    println!("c0  (intercept)    = {}", f17(fit.c0));
    println!(
        "c1  (per-n slope)  = {}   predicted {}   rel err {:.3}",
        f17(fit.c1),
        f17(fit.predicted_c1),
        ((fit.c1 - fit.predicted_c1) / fit.predicted_c1).abs()
    );
    println!(
        "c2  (log-n coeff)  = {}   predicted {}",
        f17(fit.c2),
        f17(fit.predicted_c2)
    );
    println!("residual rms       = {}", f17(fit.residual_rms));
    println!("condition number   = {}", f17(fit.condition_number));
    let paths = runner::write_scaling_artifacts(config, &run)?;
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_verify(channel: &std::path::Path, seed: u64) -> CliResult<bool> {
    let ch = load_channel(channel)?;
    let results = verify::run_verify(&ch, seed)?;
    let mut all_pass = true;
    for r in &results {
        println!(
            "check {:<24} {}  ({})",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
        all_pass &= r.pass;
    }
    Ok(all_pass)
}

fn run() -> CliResult<bool> {
    let cli = Cli::parse();
    init_threads();
    match cli.command {
        Command::Exponents { channel, rate } => {
            cmd_exponents(&channel, rate)?;
            Ok(true)
        }
        Command::Simulate {
            channel,
            rate,
            n,
            trials,
            mode,
            seed,
            out,
        } => {
            let config = ExperimentConfig::load(
                &channel,
                rate,
                parse_n_grid(&n)?,
                trials,
                mode.into(),
                seed,
                out,
            )?;
            cmd_simulate(&config)?;
            Ok(true)
        }
        Command::Scaling {
            channel,
            rate,
            n,
            trials,
            mode,
            seed,
            target,
            out,
        } => {
            let config = ExperimentConfig::load(
                &channel,
                rate,
                parse_n_grid(&n)?,
                trials,
                mode.into(),
                seed,
                out,
            )?;
            cmd_scaling(&config, target.into())?;
            Ok(true)
        }
        Command::Verify { channel, seed } => cmd_verify(&channel, seed),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
