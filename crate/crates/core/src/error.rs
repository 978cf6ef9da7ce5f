use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("cannot parse Pauli operator {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("invalid seed code {name}: {reason}")]
    InvalidSeed { name: String, reason: String },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("{{{p},{q}}} is not hyperbolic: 1/p + 1/q must be < 1/2")]
    NotHyperbolic { p: usize, q: usize },

    #[error("only q = 4 tilings are supported (got q = {0})")]
    UnsupportedQ(usize),

    #[error("tiling construction failed: {0}")]
    Tiling(String),

    #[error("generators are linearly dependent (rank {rank} < {count})")]
    Rank { rank: usize, count: usize },

    #[error("operator {tag} of tensor {tensor} cannot be pushed: {reason}")]
    Integrity {
        tensor: usize,
        tag: String,
        reason: String,
    },

    #[error("capability limit exceeded: {0}")]
    Capability(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
