use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {field}: {message}")]
    ConfigInvalid { field: String, message: String },
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown plot kind {0:?} (expected ratio-vs-cardinality, bound-vs-p or winner-map)")]
    UnknownKind(String),
    #[error("dataset {path}, line {line}: {message}")]
    Dataset {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] sparsesum_core::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

impl HarnessError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::ConfigInvalid {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for bad input, 3 for I/O. Verification failures
    /// (code 1) are not errors and are reported by the caller.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } => 3,
            Self::ConfigInvalid { .. }
            | Self::UnknownKind(_)
            | Self::Dataset { .. }
            | Self::Core(_) => 2,
        }
    }
}
