use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} is empty")]
    EmptyFile(PathBuf),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("header does not match schema: {0}")]
    HeaderMismatch(String),
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("schema: {0}")]
    Schema(String),
    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    ParseNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}, column {column}: value {value:?} is not a declared category")]
    UnknownCategory {
        row: usize,
        column: String,
        value: String,
    },
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("training set contains a single class")]
    SingleClass,
    #[error("row has {found} features, model expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("model has no members")]
    EmptyModel,
    #[error("no weak learner does better than chance on the first round")]
    NoWeakLearner,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("ROC curve needs both classes in the ground truth")]
    RocUndefined,
    #[error("model document: {0}")]
    ModelFormat(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Name of the pipeline stage an error belongs to, for diagnostics.
    pub fn module(&self) -> &'static str {
        use Error::*;
        match self {
            Io { .. } | EmptyFile(_) | Csv(_) | HeaderMismatch(_) | RaggedRow { .. } | Schema(_)
            | ParseNumber { .. } | UnknownCategory { .. } | InvalidDataset(_)
            | InvalidSplit(_) => "dataset",
            UnknownColumn(_) => "stats",
            InvalidParam(_) | SingleClass | EmptyModel | NoWeakLearner | DimensionMismatch { .. } => "model",
            LengthMismatch(..) | EmptyInput | RocUndefined => "eval",
            ModelFormat(_) | Json(_) => "model-io",
        }
    }
}
