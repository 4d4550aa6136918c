use thiserror::Error;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field degree parameter k={0} out of range (expected 1..=4)")]
    FieldDegree(u32),
    #[error("element encoding {bits} out of range for GF({order})")]
    ElementRange { bits: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not in the subfield GF(q)")]
    NotInSubfield(u32),
    #[error("norm equation with zero right-hand side")]
    ZeroNorm,
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("a line needs two distinct points")]
    SamePoint,
    #[error("invalid variety parameters: {0}")]
    InvalidParams(String),
    #[error("point {0} is not in the set")]
    PointNotInSet(String),
    #[error("invalid generator argument: {0}")]
    Domain(String),
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("no equivalence found between {0} and {1}")]
    NoEquivalence(String, String),
    #[error("{0} is not in W0")]
    NotInDomain(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
