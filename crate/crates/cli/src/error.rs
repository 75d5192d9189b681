use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, grid specs or family parameters.
    #[error("{0}")]
    Usage(String),

    #[error("invalid state: {0}")]
    InvalidState(#[source] conbound::error::Error),

    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed JSON: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),

    #[error("numerical failure: {0}")]
    Numeric(#[from] conbound::error::Error),
}

impl CliError {
    /// 0 success, 1 internal or numerical failure, 2 invalid input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::InvalidState(_)
            | CliError::Read { .. }
            | CliError::Parse { .. } => 2,
            CliError::Write { .. } | CliError::Csv(_) | CliError::Numeric(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
