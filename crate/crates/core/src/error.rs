use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Record { line: usize, message: String },

    #[error("line {line}: missing required field \"{field}\"")]
    MissingField { line: usize, field: String },

    #[error("unparseable date {raw:?}")]
    Date { raw: String },

    #[error("ambiguous date {raw:?}: formats disagree ({candidates})")]
    AmbiguousDate { raw: String, candidates: String },

    #[error("invalid pattern {pattern:?}: {message}")]
    Pattern { pattern: String, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid split: {0}")]
    Split(String),

    #[error("empty vocabulary: every term was removed by the document-frequency filters")]
    EmptyVocabulary,

    #[error("dimension mismatch: expected {expected} columns, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("training labels contain only one class")]
    SingleClass,

    #[error("class {class:?} has {count} examples, need at least {needed}")]
    ClassTooSmall {
        class: String,
        count: usize,
        needed: usize,
    },

    #[error("unknown class label {0:?}")]
    UnknownClass(String),

    #[error("article {id:?} has no {field} label")]
    MissingLabel { id: String, field: String },

    #[error("unknown article id {0:?}")]
    UnknownId(String),

    #[error("unsupported bundle format version {found} (this build reads version {supported})")]
    BundleVersion { found: u32, supported: u32 },

    #[error("bundle checksum mismatch: header {expected}, body hashes to {actual}")]
    Checksum { expected: String, actual: String },

    #[error("malformed bundle: {0}")]
    Bundle(String),

    #[error("inconsistent bundle: {0}")]
    InconsistentBundle(String),

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
