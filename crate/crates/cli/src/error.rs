use std::io;
use std::path::PathBuf;

use surf_core::document::DocumentError;
use thiserror::Error;

/// Everything that makes a command fail on its input. Domain verdicts such as
/// "not coverable" are not errors; they map to exit code 1 elsewhere.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Document {
        path: PathBuf,
        source: DocumentError,
    },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn input(message: impl ToString) -> Self {
        CliError::Input(message.to_string())
    }
}
