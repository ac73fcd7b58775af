use thiserror::Error;

use crate::conditions::Pair;

/// Reasons a raw `(d; a_1, ..., a_N)` tuple is not a covering type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeRejection {
    #[error("degree d = {0} must be at least 2")]
    RejectDegree(u64),
    #[error("at least 4 branch points are required, got {0}")]
    RejectLength(usize),
    #[error("exponent a_{index} = {value} is not in (0, d)")]
    RejectRange { index: usize, value: u64 },
    #[error("gcd(a_1, ..., a_N, d) = {0} is not 1")]
    RejectGcd(u64),
    #[error("sum of exponents {sum} is not divisible by d = {d}")]
    RejectSum { sum: u64, d: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid covering type: {0}")]
    InvalidType(#[from] TypeRejection),
    #[error("eigenspace index k = {k} is outside 1..={max}")]
    OutOfRange { k: u64, max: u64 },
    #[error("k = {k} is not coprime to d = {d}")]
    NotCoprime { k: u64, d: u64 },
    #[error("weights sum to {0}, expected 2")]
    BadWeightSum(String),
    #[error("weight vector for k = 1 has sigma = {0}, expected 2")]
    PreconditionFailed(String),
    #[error("k = {k} has sigma = {sigma}; a (1, n) signature requires sigma = 2")]
    NotUniformizingSignature { k: u64, sigma: String },
    #[error("neither INT nor Sigma-INT holds for the base weights")]
    LatticeConditionFailed,
    #[error("vanishing order on {pair} is not a positive integer (got {value})")]
    NonIntegralOrder { pair: Pair, value: String },
    #[error("ball dimension for N = {0} is not supported (N must be 5 or 6)")]
    UnsupportedDimension(usize),
    #[error("no catalogued compactification for this boundary profile: {0}")]
    UnsupportedProfile(String),
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("expected {expected} classes for a top intersection, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("divisor classes live on different models ({0} vs {1})")]
    ModelMismatch(String, String),
    #[error("operation needs a surface (N = 5)")]
    NotASurface,
    #[error("pair {pair} is contracted for the base weights but not for k = {k}")]
    BlowdownNotMonotone { pair: Pair, k: u64 },
    #[error("known commensurable rows {0} and {1} have different invariants")]
    InconsistentKnownEdges(usize, usize),
    #[error("dataset: {0}")]
    Dataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
