use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex index {index} out of range for graph with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("positive subgraph is not connected")]
    PositiveDisconnected,

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("invalid selection model: {0}")]
    InvalidSelection(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("power iteration seed is the zero vector")]
    ZeroSeed,

    #[error("could not bracket a root: {0}")]
    BracketFailure(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NotConverged { what: &'static str, iterations: usize },

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("hypercube edge {{{u}, {v}}} is not a positive edge of the host graph")]
    MissingHypercubeEdge { u: usize, v: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
