use std::path::PathBuf;
use thiserror::Error;

use crate::spf1::FormatError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Format {
        path: PathBuf,
        #[source]
        source: FormatError,
    },

    #[error("algorithm failure: {0}")]
    Algorithm(spfft_core::Error),
}

impl CliError {
    /// Process exit code: 2 validation, 3 I/O, 4 algorithm failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io { .. } | CliError::Format { .. } => 3,
            CliError::Algorithm(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<spfft_core::Error> for CliError {
    fn from(e: spfft_core::Error) -> Self {
        use spfft_core::Error::*;
        match e {
            InvalidLength(_)
            | InvalidLevel { .. }
            | InvalidOffset { .. }
            | AmbiguousSupport { .. }
            | InvalidSupportLength { .. }
            | LengthMismatch { .. }
            | InvalidParameter(_) => CliError::Validation(e.to_string()),
            _ => CliError::Algorithm(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
