//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by estimators, classifiers and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("training set needs at least {min} points, got {got}")]
    TrainingSetTooSmall { min: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty reference sample")]
    EmptyReference,

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular covariance matrix (condition number {cond:.3e})")]
    SingularCovariance { cond: f64 },

    #[error("zero spread: all sample points are equal")]
    ZeroSpread,

    #[error("density is zero at the requested quantile")]
    ZeroDensityQuantile,

    #[error("{method} is not applicable here: {reason}")]
    MethodInfeasible { method: String, reason: String },

    #[error("unknown case '{name}'; valid cases: {valid}")]
    UnknownCase { name: String, valid: String },

    #[error("unknown method '{name}'; valid methods: {valid}")]
    UnknownMethod { name: String, valid: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
