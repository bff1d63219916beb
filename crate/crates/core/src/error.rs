use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("block length {0} is not a power of two")]
    InvalidLength(usize),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("list size must be at least 1")]
    InvalidListSize,
    #[error("dimension {k} exceeds the {total} available positions")]
    DimensionTooLarge { k: usize, total: usize },
    #[error("empty sample set")]
    EmptySamples,
    #[error("mutual information {0} outside [0, 1)")]
    InvalidMutualInformation(f64),
    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
