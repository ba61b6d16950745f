use thiserror::Error;

/// Broad failure class; the CLI maps these onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A theorem or proposition check failed. Never expected.
    Verification,
    /// Missing, malformed, or insufficiently precise data.
    Data,
    /// Caller passed arguments outside an operation's domain.
    Usage,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight {0}: expected an even weight in the supported range")]
    InvalidWeight(i64),
    #[error("invalid level {0}: expected N >= 1")]
    InvalidLevel(i64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("tag mismatch: {0}")]
    TagMismatch(String),
    #[error("divisibility precondition violated: {0}")]
    Divisibility(String),
    #[error("operators do not commute")]
    NonCommuting,
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("generated span for weight {k}, level {n} has rank {rank} < {expected}")]
    BasisIncomplete { k: u32, n: u64, rank: usize, expected: usize },
    #[error("constant-term filter at weight {k}, level {n} leaves dimension {got}, expected {expected}")]
    CuspFilterInconsistent { k: u32, n: u64, got: usize, expected: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no basis data for weight {k}, level {n} ({what})")]
    MissingData { k: u32, n: u64, what: String },
    #[error("image of T_{m} is not in the space: {detail}")]
    NotInSpace { m: u64, detail: String },
    #[error("missing characteristic polynomial for p = {0}")]
    MissingCharpoly(u64),
    #[error("empty prime list")]
    EmptyPrimeList,
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("Theorem 1 violation at weight {k}, level {n}: {detail}")]
    Theorem1Violation { k: u32, n: u64, detail: String },
    #[error("T_{m} does not preserve K_0")]
    DoesNotDescend { m: u64 },
    #[error("multiplicity-one violation: {0}")]
    MultOneViolation(String),
    #[error("no random combination split the block after {draws} draws (seed {seed})")]
    DegenerateCombination { draws: usize, seed: u64 },
    #[error("minimal level is not unique: {0}")]
    UniquenessViolation(String),
    #[error("Theorem 2 violation: {0}")]
    Theorem2Violation(String),
}

impl Error {
    /// Stable machine-readable code used in JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidWeight(_) => "invalid-weight",
            Error::InvalidLevel(_) => "invalid-level",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::AmbientMismatch(..) => "ambient-mismatch",
            Error::TagMismatch(_) => "tag-mismatch",
            Error::Divisibility(_) => "divisibility",
            Error::NonCommuting => "non-commuting",
            Error::InsufficientPrecision { .. } => "insufficient-precision",
            Error::BasisIncomplete { .. } => "basis-incomplete",
            Error::CuspFilterInconsistent { .. } => "cusp-filter-inconsistent",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::Parse(_) => "parse-error",
            Error::MissingData { .. } => "missing-data",
            Error::NotInSpace { .. } => "not-in-space",
            Error::MissingCharpoly(_) => "missing-charpoly",
            Error::EmptyPrimeList => "empty-prime-list",
            Error::Io { .. } => "io-error",
            Error::Theorem1Violation { .. } => "theorem1-violation",
            Error::DoesNotDescend { .. } => "does-not-descend",
            Error::MultOneViolation(_) => "mult-one-violation",
            Error::DegenerateCombination { .. } => "degenerate-combination",
            Error::UniquenessViolation(_) => "uniqueness-violation",
            Error::Theorem2Violation(_) => "theorem2-violation",
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Theorem1Violation { .. }
            | Error::DoesNotDescend { .. }
            | Error::MultOneViolation(_)
            | Error::DegenerateCombination { .. }
            | Error::UniquenessViolation(_)
            | Error::Theorem2Violation(_)
            | Error::NotInSpace { .. } => ErrorKind::Verification,
            Error::InvalidWeight(_)
            | Error::InvalidLevel(_)
            | Error::InvalidArgument(_)
            | Error::AmbientMismatch(..)
            | Error::TagMismatch(_)
            | Error::Divisibility(_)
            | Error::NonCommuting
            | Error::EmptyPrimeList => ErrorKind::Usage,
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
