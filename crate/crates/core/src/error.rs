//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not coprime to {1}")]
    NotCoprime(i64, u64),
    #[error("element is not integral at l = {0}")]
    NotLIntegral(u64),
    #[error("saturation cap {cap} exhausted at degree {degree} without stabilization")]
    CapExhausted { cap: usize, degree: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no characteristic-zero lift with a free q-power orbit exists")]
    NoValidLift,
    #[error("pair is not admissible: {0}")]
    NotAdmissible(String),
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("rectifier constraint failed: {0}")]
    Rectifier(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
