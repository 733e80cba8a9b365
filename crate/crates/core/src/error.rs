use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("empty input set")]
    EmptyInput,

    #[error("input dates are not strictly increasing: {0}")]
    UnorderedInput(String),

    #[error("cannot derive a date from file name {0} (expected YYYY-MM-DD.txt)")]
    UndatedFile(PathBuf),

    #[error("no participants")]
    NoParticipants,

    #[error("unknown node {0:?}")]
    UnknownNode(String),

    #[error("node {0:?} has no component label")]
    MissingLabel(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed {what} at line {line}: {message}")]
    Format {
        what: &'static str,
        line: usize,
        message: String,
    },

    #[error("unknown export format {0:?} (expected dot, graphml or csv)")]
    UnknownFormat(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
