use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty instance")]
    EmptyInstance,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("no feasible solution")]
    NoFeasibleSolution,
    #[error("family too large to enumerate (cap {0})")]
    FamilyTooLarge(usize),
    #[error("degenerate pair: {0}")]
    DegeneratePair(&'static str),
    #[error("iteration cap exceeded ({0} iterations)")]
    IterationCap(u64),
    #[error("certificate requires unconstrained bounds")]
    Constrained,
    #[error("size guard exceeded: {0}")]
    TooLarge(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
