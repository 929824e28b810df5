use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("node id {id} out of range for a graph with {n_nodes} nodes")]
    NodeOutOfRange { id: usize, n_nodes: usize },

    #[error("invalid mode {mode} for a tensor of order {order}")]
    InvalidMode { mode: usize, order: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular subproblem: {0}")]
    Singular(String),

    #[error("solver diverged: {0}")]
    NonFinite(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by malformed input or arguments rather than a
    /// failure during computation.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Parse { .. }
            | Error::EmptyInput(_)
            | Error::NodeOutOfRange { .. }
            | Error::InvalidMode { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidCover(_) => true,
            Error::Io(e) => e.kind() == std::io::ErrorKind::NotFound,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
