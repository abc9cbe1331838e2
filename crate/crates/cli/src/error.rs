use std::fmt::Display;
use std::path::Path;

use thiserror::Error;

/// A failed command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input data or arguments.
    #[error("{0}")]
    Invalid(String),
    /// The filesystem refused a read or write.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    pub fn invalid(msg: impl Display) -> Self {
        CliError::Invalid(msg.to_string())
    }

    pub fn io(path: &Path, err: impl Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    /// Attaches the offending file to a core error.
    pub fn in_file(path: &Path, err: anticipate_core::Error) -> Self {
        if err.is_io() {
            // Already carries the path.
            CliError::Io(err.to_string())
        } else {
            CliError::Invalid(format!("{}: {err}", path.display()))
        }
    }
}

impl From<anticipate_core::Error> for CliError {
    fn from(err: anticipate_core::Error) -> Self {
        if err.is_io() {
            CliError::Io(err.to_string())
        } else {
            CliError::Invalid(err.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
