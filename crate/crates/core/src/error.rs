use thiserror::Error;

/// Errors raised by the graph, tree and codec operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a tree")]
    NotATree,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("PLR entry {index} (value {value}) is outside the admissible range")]
    PlrOutOfBounds { index: usize, value: usize },

    #[error("PLR is incomplete")]
    PlrIncomplete,

    #[error("PLR has trailing entries after completion at index {0}")]
    PlrTrailing(usize),

    #[error("unsupported size {0}")]
    UnsupportedSize(usize),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("malformed decision sequence: {0}")]
    MalformedSequence(String),

    #[error("supernode {0} shares no node with its parent")]
    EmptySharing(usize),

    #[error("supernode {0} introduces no new node")]
    EmptyBag(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("model format: {0}")]
    Model(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
