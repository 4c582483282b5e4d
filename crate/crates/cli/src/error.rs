use std::path::PathBuf;

use dynmatch::MatchError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("update {index} ({update}) failed: {source}")]
    Engine {
        index: usize,
        update: String,
        #[source]
        source: MatchError,
    },

    #[error(transparent)]
    Match(#[from] MatchError),

    #[error("{0}")]
    Usage(String),
}
