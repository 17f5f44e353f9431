use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("invalid multicolor assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid triple pair: {0}")]
    InvalidPair(String),

    #[error("invalid vertex set: {0}")]
    InvalidSet(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("graph has {vertices} vertices, exact solver cap is {cap}; use the greedy solver")]
    SizeLimit { vertices: usize, cap: usize },

    #[error("generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
