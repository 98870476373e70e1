use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is out of range (expected 2 <= q < 2^63)")]
    InvalidModulus(u64),

    #[error("a ring needs at least one modulus")]
    EmptyRing,

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("{value} is not a unit mod {modulus} (gcd = {gcd})")]
    NotAUnit { value: u64, modulus: u64, gcd: u64 },

    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("entry count {found} does not fill a {rows}x{cols} matrix")]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("modulus {0} is not prime; the field bound does not apply")]
    NotPrime(u64),

    #[error("no eventual period found up to the cap {cap}")]
    PeriodExceedsCap { cap: u64 },

    #[error("state space has {size} states, above the cap {cap}")]
    StateSpaceTooLarge { size: BigUint, cap: u64 },

    #[error("expected {expected} ring components, found {found}")]
    ComponentCountMismatch { expected: usize, found: usize },

    #[error("cycle census is inconsistent: {0}")]
    InconsistentCensus(String),
}
