use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not in the ring: {0}")]
    NotInRing(String),
    #[error("scalars or matrices live over different backends ({left} vs {right})")]
    BackendMismatch { left: String, right: String },
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("quotient {0} is not in the ring")]
    NotDivisible(String),
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("minor size {k} is out of range for a {rows}x{cols} matrix")]
    BadMinorSize { k: usize, rows: usize, cols: usize },
    #[error("transform is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("window index {index} out of range 1..={max}")]
    BadWindow { index: usize, max: usize },
    #[error("size {0} is too large for exhaustive enumeration")]
    SizeTooLarge(usize),
    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("point is not on the variety: some maximal minor is nonzero")]
    PointNotOnVariety,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
