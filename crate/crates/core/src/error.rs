use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("header mismatch at column {index}: expected `{expected}`, found `{found}`")]
    HeaderMismatch {
        index: usize,
        expected: String,
        found: String,
    },

    #[error("unparseable value `{value}` at row {row}, column `{column}`")]
    UnparseableCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("ragged row {row}: expected {expected} cells, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid label `{value}` at row {row}")]
    InvalidLabel { row: usize, value: String },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("duplicate drop name `{0}`")]
    DuplicateDropName(String),

    #[error("feature mismatch at column {index}: model has `{expected}`, dataset has `{found}`")]
    FeatureMismatch {
        index: usize,
        expected: String,
        found: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unsupported model format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("corrupt file {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
