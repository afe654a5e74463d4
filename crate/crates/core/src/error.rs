use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime; field operations need a prime modulus")]
    CompositeModulus(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("matrix has {0} columns, beyond the exhaustive budget of 10")]
    TooManyColumns(usize),
    #[error("budget exceeded for {what}: {size} > {limit}")]
    BudgetExceeded { what: &'static str, size: u128, limit: u128 },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("gcd({a}, {n}) != 1")]
    NotCoprime { a: u64, n: u64 },
    #[error("base set is empty")]
    EmptyBase,
    #[error("regularity scan exhausted without a regular width")]
    ScanExhausted,
    #[error("search timed out at N = {0}")]
    Timeout(u64),
    #[error("no refutation found up to N = {0}")]
    NoRefutationBelow(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
