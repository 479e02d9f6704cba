use std::fmt;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot invert zero")]
    ZeroInversion,
    #[error("denominator vanishes modulo {0}")]
    DenominatorVanishes(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range [2, 2^62)")]
    ModulusOutOfRange(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("exponent overflow in monomial product")]
    ExponentOverflow,
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid JSON system: {0}")]
    Json(String),
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("monomial order is not degree compatible")]
    OrderNotDegreeCompatible,
    #[error("prime {prime} is not large relative to the coefficients (max |c| = {max_coeff})")]
    PrimeTooSmall { prime: u64, max_coeff: String },
    #[error("generator {0} vanishes modulo the prime")]
    GeneratorVanishesModP(usize),
    #[error("search space {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("selected submatrix is singular")]
    SingularSubmatrix,
    #[error("computation exceeded its deadline")]
    Timeout,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl fmt::Display) -> Error {
    Error::InvalidArgument(msg.to_string())
}
