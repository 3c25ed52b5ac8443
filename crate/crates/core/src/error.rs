use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("metric {0} is not supported in exact arithmetic")]
    UnsupportedMetric(&'static str),
    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },
    #[error("curve is empty")]
    EmptyCurve,
    #[error("update budget exhausted; partition must be rebuilt")]
    RebuildRequired,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("reduction inconsistency: {0}")]
    ReductionInconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
