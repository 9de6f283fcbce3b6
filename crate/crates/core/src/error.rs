use crate::numerics::HalfInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed angular momentum pair (j = {j}, m = {m}): m - j must be an integer and |m| <= j")]
    MalformedPair { j: HalfInt, m: HalfInt },

    #[error("alternating spin sum is {sum}, must vanish for the bond relations to be solvable")]
    ConditionViolated { sum: HalfInt },

    #[error("bond ({bond}, {}) has bond number {value}, must be at least 1", bond + 1)]
    NonPositiveBond { bond: usize, value: i64 },

    #[error("chain needs at least 3 sites (two ends and one bulk spin), got {0}")]
    TooShort(usize),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("block start {start} length {len} outside bulk sites 1..={bulk}")]
    OutOfRange { start: usize, len: usize, bulk: usize },

    #[error("total spin {j} outside the allowed range {min}..={max}")]
    SpinOutOfRange { j: HalfInt, min: HalfInt, max: HalfInt },

    #[error("magnetic number {m} not allowed for total spin {j}")]
    MagneticOutOfRange { j: HalfInt, m: HalfInt },

    #[error("Hamiltonian coefficient for bond {bond}, J = {j} must be positive")]
    NonPositiveCoefficient { bond: usize, j: HalfInt },

    #[error("no projector term for bond {bond}, J = {j}")]
    UnknownCoefficient { bond: usize, j: HalfInt },

    #[error("state vectors live on different site spaces")]
    SpaceMismatch,

    #[error("density matrix is not of the predicted multiplet form: {0}")]
    Consistency(String),

    #[error("closed-form eigenvalues sum to {0} instead of 1")]
    NormalizationFailure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Renyi order must be positive and different from 1, got {0}")]
    InvalidRenyiOrder(f64),

    #[error("chain file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
