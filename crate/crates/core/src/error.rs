use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus polynomial is reducible over F_{0}")]
    ReduciblePolynomial(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("unsupported field order {0}")]
    UnsupportedOrder(u64),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("index {index} out of range for {len} columns")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix does not have full row rank (rank {rank}, rows {rows})")]
    NotFullRowRank { rank: usize, rows: usize },
    #[error("matrix is not row-balanced")]
    NotBalanced,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("polynomial degree {degree} exceeds {limit}")]
    DegreeTooHigh { degree: u64, limit: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    /// A mathematical invariant that must hold did not. Reported with exit code 1 by the CLI.
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
