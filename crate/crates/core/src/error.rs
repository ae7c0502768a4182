use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd is undefined when both polynomials are zero")]
    ZeroGcd,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the first point triple must be pairwise distinct")]
    CoincidentPoints,
    #[error("collinear normalisation would need an irrational rotation")]
    IrrationalNormalizer,
    #[error("polynomial degree {0} is below the required minimum of 3")]
    DegreeTooLow(usize),
    #[error("invalid ground set: {0}")]
    InvalidGroundSet(String),
    #[error("cannot split {len} elements into {t} non-empty segments")]
    PartitionTooFine { t: usize, len: usize },
    #[error("{0} is not an element of the ground set")]
    NotAMember(String),
    #[error("{0} is not a value of the image set")]
    UnknownValue(String),
    #[error("counter overflow while accumulating {0}")]
    CountOverflow(&'static str),
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("at least two distinct sizes are needed, got {0}")]
    TooFewPoints(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("refusing desk-scale limit: {0}")]
    Guardrail(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
