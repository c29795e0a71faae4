use std::path::PathBuf;

/// Broad classes of failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input files, configuration or arguments.
    Input,
    /// An embedding or matching backend could not answer.
    Backend,
    /// An internal invariant was violated.
    Internal,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("embeddings missing for {} argument(s): {}", .0.len(), .0.join(", "))]
    MissingEmbeddings(Vec<String>),

    #[error("zero vector for argument {0}")]
    ZeroVector(String),

    #[error("no match score for pair ({argument}, {key_point})")]
    MissingPair { argument: String, key_point: String },

    #[error("transport error: {0}")]
    Transport(String),

    #[error("empty text: {0}")]
    EmptyText(String),

    #[error("no labeled arguments")]
    NoLabeledArguments,

    #[error("insufficient arguments{context}: required {required}, available {available}")]
    Capacity {
        context: String,
        required: usize,
        available: usize,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Transport(_) => ErrorKind::Backend,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
