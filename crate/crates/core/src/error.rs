use thiserror::Error;

/// Errors raised by the estimation, band and policy routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is empty")]
    Empty,
    #[error("quantile level must lie strictly inside (0, 1), got {0}")]
    InvalidTau(f64),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("box bounds must satisfy lo < hi, got [{lo}, {hi}]")]
    InvalidBox { lo: f64, hi: f64 },
    #[error("sequence is not non-decreasing at index {0}")]
    NotMonotone(usize),
    #[error("exact oracle is limited to n <= {max}, got n = {n}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("alpha must lie strictly inside (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("band construction needs at least 3 observations, got {0}")]
    TooFewObservations(usize),
    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(f64),
    #[error("region has zero Lebesgue measure")]
    EmptyRegion,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid function spec: {0}")]
    InvalidSpec(String),
    #[error("degenerate noise admits no local growth constant")]
    DegenerateNoise,
}

pub type Result<T> = std::result::Result<T, Error>;
