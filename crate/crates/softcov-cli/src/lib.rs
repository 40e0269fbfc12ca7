//! Experiment layer behind the `softcov` binary: configuration, campaign
//! running, scaling-law regression, inequality verification, and CSV/JSON
//! artifact formatting.

pub mod config;
pub mod fmt;
pub mod report;
pub mod runner;
pub mod scaling;
pub mod verify;

/// Errors surfaced by the experiment layer. Everything here maps to exit
/// code 2 (usage/validation); check failures in `verify` use exit code 1 and
/// are not errors.
#[derive(Debug)]
pub enum CliError {
    Core(softcov::Error),
    Config(String),
    NonPositiveMean {
        n: usize,
        mean: f64,
    },
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::NonPositiveMean { n, mean } => write!(
                f,
                "measured mean at n = {n} is {mean:e}; need more trials for a log-scale fit"
            ),
            CliError::Io { path, source } => write!(f, "io error on {path}: {source}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<softcov::Error> for CliError {
    fn from(e: softcov::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
