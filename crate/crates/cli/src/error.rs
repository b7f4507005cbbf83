use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid JSON document: {0}")]
    JsonText(#[from] serde_json::Error),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    /// `row` is the 1-based line number in the file (the header is line 1).
    #[error("row {row}, column {column}: {reason}")]
    MalformedRow { row: u64, column: String, reason: String },
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("nothing to plot")]
    EmptyData,
    #[error("invalid plot spec: {0}")]
    InvalidPlot(&'static str),
    #[error("write failed: {0}")]
    SinkWrite(#[source] io::Error),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Model(#[from] clearfom_core::Error),
}

impl FormatError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        FormatError::Io { path: path.into(), source }
    }
}
