//! Library side of the `fsc-capacity` command-line tool: configuration,
//! run orchestration and the trace/report file formats.

pub mod commands;
pub mod config;
pub mod format;
pub mod report;

use thiserror::Error;

/// Failure classes with fixed process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or inconsistent configuration (exit 1).
    #[error("{0}")]
    Config(String),
    /// The start-up audit rejected the run (exit 2).
    #[error("verification failed: {0}")]
    Verification(String),
    /// Anything that went wrong while computing (exit 3).
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
