//! Batch generation, validation and benchmarking of node deployments.
//!
//! Exit codes: 0 ok, 2 invalid configuration or plan, 3 I/O or parse
//! failure, 4 statistical validation failure.

pub mod bench;
pub mod commands;
pub mod io;

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    ValidationFailed(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io(_) | CliError::Parse(_) => 3,
            CliError::ValidationFailed(_) => 4,
        }
    }
}

impl From<netdeploy::Error> for CliError {
    fn from(e: netdeploy::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}
