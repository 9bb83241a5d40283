use std::path::PathBuf;

use thiserror::Error;

use crate::audit::AuditDiagnostics;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    #[error("row {row}: {reason}")]
    RejectedRow { row: usize, reason: String },

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("column layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("no selected examples")]
    NoSelected,

    #[error("no not-selected examples")]
    NoNotSelected,

    #[error("dimension mismatch: expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("non-positive total weight")]
    NonPositiveWeight,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("insufficient rows: need at least {k} rows of each class, have {positives} selected and {negatives} not selected")]
    InsufficientRows {
        k: usize,
        positives: usize,
        negatives: usize,
    },

    #[error("audit inconclusive: no fold MCC could be computed for any of {} models", .0.models_evaluated)]
    Inconclusive(AuditDiagnostics),

    #[error("no scored divisions to rasterize")]
    NoScoredDivisions,

    #[error("image encoding failed: {0}")]
    Image(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
