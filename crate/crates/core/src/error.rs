use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("input is not homogeneous: found terms of degree {first} and {second}")]
    Inhomogeneous { first: u32, second: u32 },

    #[error("the zero polynomial has no degree and cannot be analysed")]
    ZeroForm,

    #[error("ambient mismatch: {left} variables vs {right} variables")]
    AmbientMismatch { left: usize, right: usize },

    #[error("not bi-homogeneous: `{first}` has bidegree {first_bidegree:?} but `{second}` has {second_bidegree:?}")]
    NotBihomogeneous {
        first: String,
        first_bidegree: (u32, u32),
        second: String,
        second_bidegree: (u32, u32),
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix of size {size} exceeds the symbolic cap of {cap}")]
    OverSymbolicCap { size: usize, cap: usize },

    #[error("expected a binary form, got {0} variables")]
    NotBinary(usize),

    #[error("parts do not sum to the target form")]
    PartsMismatch,

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("invalid family specification: {0}")]
    Family(String),

    #[error("genericity conditions still failing after {attempts} seeds: {reason}")]
    GenericityExhausted { attempts: u32, reason: String },

    #[error("arithmetic overflow evaluating {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
