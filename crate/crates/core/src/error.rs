use thiserror::Error;

use crate::diagram::EdgeLabel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("malformed PD code: {0}")]
    Malformed(String),
    #[error("edge label {label} appears {count} times (expected exactly twice)")]
    LabelCount { label: EdgeLabel, count: usize },
    #[error("inconsistent orientation: {0}")]
    Orientation(String),
    #[error("base point {0} is not an edge of the diagram")]
    BasePoint(EdgeLabel),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(
        "diagram has {generators} enhanced states, above the cap of {cap} (raise it with --cap)"
    )]
    CapExceeded { generators: u128, cap: u64 },
    #[error("{0}")]
    InvalidRing(String),
    #[error("diagram has {0} crossings; at most 63 are supported")]
    TooManyCrossings(usize),
    #[error("a resolution has {0} circles; at most 64 are supported")]
    TooManyCircles(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("boundary maps do not compose to zero")]
    NonZeroComposition,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("torsion coefficient too large to factor: {0}")]
    FactorTooLarge(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("graded Euler characteristic is not divisible by q + 1/q")]
    NotDivisible,
    #[error("polynomial is not of pure parity")]
    MixedParity,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pd(#[from] PdError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("census line {line}: {message}")]
    Census { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("store: {0}")]
    Store(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
