use thiserror::Error;

/// Errors raised by ring arithmetic, factorization and the verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("d = {0} is not one of -163, -67, -43, -19, -11, -7, -3, -2, -1")]
    InvalidDiscriminant(i64),

    #[error("operands live in different rings (d = {left} and d = {right})")]
    MixedRings { left: i64, right: i64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("operation is undefined for the zero element")]
    ZeroElement,

    #[error("operation is undefined for the integer 0")]
    ZeroInput,

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("exponent n = {0} must be a nonzero even integer")]
    OddExponent(i64),

    #[error("exponent n = {0} must be positive")]
    NonPositiveExponent(i64),

    #[error("{0}")]
    TooLarge(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("both norm-2 primes divide {0}, contradicting the either/or decomposition")]
    BothNormTwoPrimesDivide(String),

    #[error("closed form and divisor enumeration disagree for {0}")]
    OracleMismatch(String),

    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
