use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: no valid tweet records ({rejected} rows rejected)")]
    EmptyCorpus { path: PathBuf, rejected: usize },

    #[error("invalid month range: start {start} is not before end {end}")]
    InvalidRange { start: String, end: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {message}")]
    Table { path: String, message: String },

    #[error("unknown sentiment label {0:?}")]
    UnknownLabel(String),

    #[error("classifier backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("no prediction for tweet {0:?} in precomputed labels")]
    MissingPrediction(String),

    #[error("model inference failed: {0}")]
    Inference(String),

    #[error("no scored tweets for {0}")]
    NoData(String),

    #[error("invalid config: {0}")]
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

    pub(crate) fn table(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Table {
            path: path.into(),
            message: message.into(),
        }
    }
}
