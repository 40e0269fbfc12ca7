//! Experiment configuration: channel file, rate, blocklength grid, trial
//! schedule, and seed.

use std::path::{Path, PathBuf};

use softcov::channel::{load_channel, DiscreteChannel};
use softcov::simulator::SizeMode;

use crate::{CliError, CliResult};

/// Which divergence a scaling fit targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Kl,
    Tv,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Kl => write!(f, "kl"),
            Target::Tv => write!(f, "tv"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub channel: DiscreteChannel,
    pub channel_path: PathBuf,
    pub rate: f64,
    pub n_grid: Vec<usize>,
    /// Explicit per-n trial count; `None` uses the default schedule.
    pub trials: Option<usize>,
    pub mode: SizeMode,
    pub master_seed: u64,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// Load and validate: the channel file must parse, the rate must exceed
    /// the mutual information, and an explicit trial count must be >= 100.
    pub fn load(
        channel_path: &Path,
        rate: f64,
        n_grid: Vec<usize>,
        trials: Option<usize>,
        mode: SizeMode,
        master_seed: u64,
        out_dir: PathBuf,
    ) -> CliResult<Self> {
        let channel = load_channel(channel_path)?;
        let mi = channel.mutual_information();
        if rate.is_nan() || rate <= mi {
            return Err(CliError::Core(softcov::Error::RateBelowMi { rate, mi }));
        }
        if n_grid.is_empty() {
            return Err(CliError::Config("blocklength grid is empty".into()));
        }
        if n_grid.contains(&0) {
            return Err(CliError::Config("blocklengths must be positive".into()));
        }
        if let Some(t) = trials {
            if t < 100 {
                return Err(CliError::Config(format!(
                    "trials = {t} is below the minimum of 100"
                )));
            }
        }
        let mut n_grid = n_grid;
        n_grid.sort_unstable();
        n_grid.dedup();
        Ok(ExperimentConfig {
            channel,
            channel_path: channel_path.to_path_buf(),
            rate,
            n_grid,
            trials,
            mode,
            master_seed,
            out_dir,
        })
    }

    /// Trials at blocklength `n`: the explicit count, or the default
    /// schedule `max(200, 20000 / 2^n)` balancing stderr against per-trial
    /// cost growth.
    pub fn trials_for(&self, n: usize) -> usize {
        match self.trials {
            Some(t) => t,
            None => {
                let decayed = 20_000usize >> n.min(63);
                decayed.max(200)
            }
        }
    }
}

/// Parse a comma-separated blocklength list such as `4,5,6`.
pub fn parse_n_grid(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("bad blocklength {part:?} in --n")))
        })
        .collect()
}
