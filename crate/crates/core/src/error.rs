use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("not Hermitian: max |M - M†| = {0:e}")]
    NotHermitian(f64),

    #[error("NotUnitTrace: trace is {0} (expected 1)")]
    NotUnitTrace(f64),

    #[error("NotPSD: eigenvalue {0:e} is below tolerance")]
    NotPsd(f64),

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("invalid party set: {0}")]
    InvalidPartySet(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} = {value} is out of range (expected {expected})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        expected: String,
    },

    #[error("need at least {min} parties, got {found}")]
    TooFewParties { min: usize, found: usize },

    #[error("operator dimension {dim} exceeds the cap of {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("eigendecomposition failed to converge")]
    EigenFailure,

    #[error("undefined extended-real arithmetic: {0}")]
    UndefinedArithmetic(&'static str),

    #[error("expected a {expected}-party state, got {found} parties")]
    WrongArity { expected: usize, found: usize },

    #[error("unknown demo {0:?} (expected ghz, product, bell or mixed)")]
    UnknownDemo(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("state file: {0}")]
    Format(String),

    #[error("state file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by state or channel validation and input parsing.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NotSquare { .. }
                | Error::NonFinite
                | Error::NotHermitian(_)
                | Error::NotUnitTrace(_)
                | Error::NotPsd(_)
                | Error::InvalidLabels(_)
                | Error::InvalidPartySet(_)
                | Error::InvalidPermutation(_)
                | Error::OutOfRange { .. }
                | Error::TooFewParties { .. }
                | Error::InvalidChannel(_)
                | Error::WrongArity { .. }
                | Error::Format(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
