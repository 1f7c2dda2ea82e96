use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: unsupported audio encoding ({found})")]
    UnsupportedEncoding { path: PathBuf, found: String },

    #[error("{path}: malformed WAV: {reason}")]
    MalformedWav { path: PathBuf, reason: String },

    #[error("invalid audio: {0}")]
    InvalidAudio(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}, row {row}: {reason}")]
    Row {
        path: String,
        row: usize,
        reason: String,
    },

    #[error("{path}: missing column '{column}'")]
    MissingColumn { path: String, column: String },

    #[error("design matrix is rank deficient (column '{column}')")]
    RankDeficient { column: String },

    #[error("not enough observations: n = {n}, need at least {needed} for p = {p}")]
    TooFewRows { n: usize, p: usize, needed: usize },

    #[error("feature '{0}' has zero variance")]
    ZeroVariance(String),

    #[error("empty feature subset")]
    EmptySubset,

    #[error("unknown feature '{0}'")]
    UnknownFeature(String),

    #[error("non-finite feature value for '{0}'")]
    NonFiniteFeature(String),

    #[error("model file: {0}")]
    Schema(String),

    #[error("model schema version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("provider: {0}")]
    Provider(String),

    #[error("server: {0}")]
    Server(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
