use thiserror::Error;

/// Library-wide error type.
///
/// Finite-precision answers carry their own audit data (margins) in the
/// success types; errors are reserved for contract violations and for
/// decisions that cannot be made honestly at the working precision.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("not a unit in Z_p (valuation > 0 or zero at precision)")]
    NonUnit,

    #[error("empty vector has no norm")]
    EmptyVector,

    #[error("not a simple root: need f(a0) = 0 mod p and f'(a0) a unit mod p")]
    NotASimpleRoot,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("not a member of the group")]
    NotAMember,

    #[error("precision exhausted: needs {needed} digits but only {available} available; raise the working precision")]
    PrecisionExhausted { needed: u32, available: u32 },

    #[error(
        "no contractive extension exists at this precision (constraint {constraint} unsatisfiable)"
    )]
    NotContractive { constraint: usize },

    #[error("no separating functional found (element lies in the subgroup at precision, or the order hypothesis fails)")]
    NotFound,

    #[error("invalid factored form: {0}")]
    InvalidForm(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
