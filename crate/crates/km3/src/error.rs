//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Km3Error {
    #[error("cannot factor 0")]
    FactorZero,

    #[error("factorization of {n} exceeds the trial-division bound {bound}")]
    FactorBoundExceeded { n: i64, bound: i64 },

    #[error("{0} is not prime")]
    NotPrime(i64),

    #[error("zero coefficient in a nondegenerate form")]
    ZeroCoefficient,

    #[error("ell = {0} must be nonzero and congruent to 0 or 2 mod 6")]
    BadCongruence(i64),

    #[error("ell = {0} must be positive here")]
    NotPositive(i64),

    #[error("ell = {0} must be nonpositive here")]
    NotNonpositive(i64),

    #[error("d = {0} is not admissible: it must be square-free with every prime factor congruent to 2 mod 3")]
    InadmissibleD(i64),

    #[error("basis does not span an order: {0}")]
    NotAnOrder(String),

    #[error("norm mismatch: {0} vs {1}")]
    NormMismatch(i64, i64),

    #[error("unsupported computation: {0}")]
    Unsupported(String),

    #[error("reflection vector must have square 2 or 6, got {0}")]
    BadReflectionSquare(i64),

    #[error("domain reduction did not terminate within {0} steps")]
    ReductionStuck(usize),

    #[error("vector {0:?} is not primitive")]
    NotPrimitive([i64; 4]),

    #[error("vector must have negative square, got {0}")]
    NotNegativeSquare(i64),

    #[error("lattice is degenerate")]
    DegenerateLattice,

    #[error("lattice is not even")]
    OddLattice,

    #[error("input out of range: {what} exceeds bound {bound}")]
    BoundExceeded { what: &'static str, bound: i64 },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("rank or definiteness mismatch between lattices")]
    LatticeMismatch,
}
