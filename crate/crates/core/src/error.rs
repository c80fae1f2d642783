use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the pipeline stages.
#[derive(Debug, Error)]
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
        line: usize,
        message: String,
    },

    /// A precondition on the input data was violated.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("training failed: {0}")]
    Training(String),

    /// A human-verdict provider answered outside the question's answer set,
    /// or had no answer for a question it was asked.
    #[error("verdict protocol: {0}")]
    Protocol(String),

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn input(message: impl Into<String>) -> Self {
        Error::Input(message.into())
    }

    /// Short stable identifier, suitable for prefixing diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Input(_) => "input",
            Error::Training(_) => "training",
            Error::Protocol(_) => "protocol",
            Error::Lookup { .. } => "lookup",
            Error::Serde(_) => "serde",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
