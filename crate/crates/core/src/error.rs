use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric: |S[{row},{col}] - S[{col},{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("matrix is rank deficient: lambda_min = {lambda_min:e}, lambda_max = {lambda_max:e}")]
    RankDeficient { lambda_min: f64, lambda_max: f64 },

    #[error("matrix dimension {0} exceeds the eigensolver limit of 1024")]
    TooLarge(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("missing required capability: {0}")]
    MissingCapability(String),

    #[error("no usable samples: {0}")]
    NoSamples(String),

    #[error("gradient blow-up on the segment starting at z = {z:?}")]
    GradientBlowUp { z: Vec<f64> },

    #[error("trace does not contract (delta = {delta:e}); no secant constant can be inferred")]
    NonContracting { delta: f64 },

    #[error("too few points for a rate fit: {available} available, 10 required")]
    TooFewPoints { available: usize },

    #[error("unknown oracle id `{0}`")]
    UnknownOracle(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
