use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("enumeration cap exceeded: n = {n} exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("work cap exceeded: {0}")]
    WorkCap(String),
    #[error("LP cap exceeded: {rows} rows exceeds cap {cap}")]
    LpCapExceeded { rows: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("distribution cannot be sampled: {0}")]
    Unsampleable(String),
    #[error("not a threshold function")]
    NotThreshold,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("all weights are zero")]
    ZeroWeights,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
