use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: expected S^{expected}, got S^{found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: point has norm {norm}, which is not within 1e-6 of the unit sphere")]
    NotUnitNorm { line: usize, norm: f64 },

    #[error("unknown design `{0}`")]
    UnknownDesign(String),

    #[error("design strength {available} is insufficient, at least {required} is needed")]
    InsufficientStrength { required: usize, available: usize },

    #[error("points are not a {strength}-design: defect {defect:e} at degree {degree}")]
    NotADesign { strength: usize, degree: usize, defect: f64 },

    #[error("Gram matrix deviates from n*I by {deviation:e} (allowed {allowed:e})")]
    GramInvariant { deviation: f64, allowed: f64 },

    #[error("operation needs an explicit harmonic basis, which exists only for d = 1 and d = 2 (got d = {0})")]
    NoExplicitBasis(usize),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("design download failed: {0}")]
    Fetch(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
