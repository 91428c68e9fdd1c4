use std::path::PathBuf;
use thiserror::Error;

/// CLI errors carry the process exit code: 1 hard failure, 2 usage, 3 I/O.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<mospec_core::Error> for CliError {
    fn from(e: mospec_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
