use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch")]
    FieldMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not epsilon-stable")]
    NotEpsilonStable,
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("not lagrangian: {0}")]
    NotLagrangian(String),
    #[error("not isotropic")]
    NotIsotropic,
    #[error("not an isotropic plane")]
    NotIsotropicPlane,
    #[error("flag violation")]
    FlagViolation,
    #[error("enumeration too large: {estimate} candidates exceed guard {guard}")]
    EnumerationTooLarge { estimate: u128, guard: u128 },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("not largest stratum: i = {i}, k = {k}")]
    NotLargestStratum { i: usize, k: usize },
    #[error("degree sum mismatch: expected {expected}, found {found}")]
    DegreeSumMismatch { expected: i64, found: i64 },
    #[error("orthogonality certificate failed: {0}")]
    CertificateFailed(String),
    #[error("malformed case data: {0}")]
    Malformed(String),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
