use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid support grid: {0}")]
    InvalidGrid(String),
    #[error("grid index {index} out of range for m = {m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("value {0} does not lie on the support grid")]
    OffGrid(f64),
    #[error("a sample must contain at least one value")]
    EmptySample,
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("quantile index {i} out of range for n = {n}")]
    QuantileIndex { i: usize, n: usize },
    #[error("sample space of {count} samples exceeds the enumeration limit of {limit}")]
    EnumerationLimit { count: u128, limit: u128 },
    #[error("order is not total: {0}")]
    NotTotal(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("alpha must lie in [0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("no distribution on support {support:?} reaches probability {alpha} on the upper set")]
    Infeasible { alpha: f64, support: Vec<usize> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("closed form undefined: {0}")]
    Undefined(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bound values missing for {0} samples")]
    MissingSamples(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
