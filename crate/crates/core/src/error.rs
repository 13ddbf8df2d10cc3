use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval exchange needs at least 2 intervals, got {0}")]
    TooFewIntervals(usize),
    #[error("length {index} is not positive ({value})")]
    NonPositiveLength { index: usize, value: String },
    #[error("permutation {perm} is reducible: it maps {{1..{k}}} onto itself")]
    ReduciblePermutation { perm: String, k: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("point {0} lies outside the domain")]
    OutOfDomain(String),
    #[error("iterate cap of {0} exceeded")]
    IterateCapExceeded(u64),
    #[error("degenerate lengths: lambda_n equals lambda_(pi^-1(n)) at interval {0}")]
    DegenerateLengths(usize),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("return word of length {0} exceeds the explicit word limit")]
    WordTooLong(u128),
    #[error("unsupported representation label: {0}")]
    UnsupportedLabel(String),
    #[error("group descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("states do not share the same base interval exchange")]
    MismatchedBase,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
