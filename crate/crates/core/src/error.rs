use thiserror::Error;

/// Failure modes shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs more than {budget} (budget)")]
    Capacity { what: &'static str, budget: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("label space is not binary ({0} labels)")]
    NotBinary(usize),
    #[error("inconsistent projection: {0}")]
    InconsistentProjection(String),
    #[error("realizability violation: {0}")]
    Realizability(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("unknown datapoint {0}")]
    UnknownPoint(String),
    #[error("loss table has no entry for (predicted {predicted}, true {truth})")]
    MissingLossEntry { predicted: String, truth: String },
    #[error("insufficient samples: need {needed}, have {available}")]
    InsufficientSamples { needed: usize, available: usize },
    #[error("right node {0} has no incident edge")]
    IsolatedRightNode(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
