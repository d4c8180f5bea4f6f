use thiserror::Error;

/// Errors produced by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("mismatched moduli: GF({0}) vs GF({1})")]
    ModulusMismatch(u32, u32),
    #[error("elements belong to different signatures")]
    SignatureMismatch,
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("vector field is not contact: {0}")]
    NotContact(String),
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),
    #[error("basis is not closed under the bracket: [{left}, {right}] leaves the span")]
    NotClosed { left: String, right: String },
    #[error("operator {0} does not act diagonalizably over the prime field")]
    NotDiagonalizable(String),
    #[error("algebra dimension {dim} exceeds the brute-force cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("algebra is not simple: {0}")]
    NotSimple(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
