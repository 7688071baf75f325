use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid exponent p = {0}: must be finite and >= 1")]
    InvalidExponent(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("estimation budget must have at least one start")]
    ZeroBudget,

    #[error("{what} has size {size}, above the configured cap {cap}")]
    ResourceCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("degenerate seminorm at level {level}: {reason}")]
    Degenerate { level: usize, reason: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
