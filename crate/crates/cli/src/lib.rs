//! Library behind the `martail` command-line runner: configuration
//! parsing, built-in verification suites, experiment execution, and CSV
//! reporting.

pub mod config;
pub mod report;
pub mod run;
pub mod suites;

use thiserror::Error;

/// Errors that terminate a command with exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] martail::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
