use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while reading capture files and manifests.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Fs {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("not a directory: {0}")]
    MissingDirectory(PathBuf),
    #[error("{path}: row {row}, column {column}: {message}")]
    Cell {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },
    #[error("{path}: {message}")]
    Structure { path: PathBuf, message: String },
    #[error("{path}: missing fps header")]
    MissingFps { path: PathBuf },
    #[error("{path}: invalid fps {fps}")]
    InvalidFps { path: PathBuf, fps: f64 },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("invalid manifest: {0}")]
    Manifest(String),
}

/// Data is present but cannot support the requested measurement.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("quality: {0}")]
pub struct QualityError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("no flight apex in the COM signal")]
    NoApex,
    #[error("descent window has {0} frames, need at least 4")]
    ShortDescent(usize),
    #[error("free-fall fit residual {0:.4} exceeds 0.1")]
    PoorFit(f64),
    #[error("non-physical free-fall curvature {0}")]
    BadCurvature(f64),
    #[error("keypoint unusable for calibration: {0}")]
    Unusable(&'static str),
    #[error("invalid calibration input: {0}")]
    Precondition(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unit mismatch: expected {expected}, found {found}")]
    UnitMismatch { expected: String, found: String },
    #[error(transparent)]
    Quality(#[from] QualityError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Io(#[from] IoError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn quality(msg: impl Into<String>) -> Error {
    Error::Quality(QualityError(msg.into()))
}
