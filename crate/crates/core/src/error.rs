use thiserror::Error;

/// Errors raised by constructions, reductions and oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    #[error("search too large: {what} needs {needed}, budget is {budget}")]
    TooLarge {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("edge {edge} has an empty constraint set")]
    EmptyConstraint { edge: usize },

    #[error("assignment violates edge {edge}")]
    NotSatisfying { edge: usize },

    #[error("vector does not solve the linear system")]
    NotASolution,

    #[error("composition requires nonzero target vectors")]
    ZeroTarget,

    #[error("parameter too small: {0}")]
    ParameterTooSmall(String),

    #[error("gadget parameter window is empty: {0}")]
    EmptyWindow(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("materialization refused: {0}")]
    SizeOverflow(String),

    #[error("tensor amplification needs p = 2, got p = {0}")]
    WrongNorm(u32),

    #[error("no reduction from {from} to {to}")]
    IllegalEdge { from: String, to: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn too_large(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        Error::TooLarge {
            what: what.into(),
            needed: needed.to_string(),
            budget,
        }
    }
}
