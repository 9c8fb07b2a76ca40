//! Crate-wide error type.
//!
//! One enum covers all stages so the CLI can map variants onto its exit
//! codes (config 2, missing artifact 3, provider 4, numerical 5).

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("duplicate sample id {id}")]
    DuplicateId { id: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid k={k} for {n} items")]
    InvalidK { k: usize, n: usize },

    #[error("config error at `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error("missing artifact {path}; run `beacon {command}` first")]
    MissingArtifact { path: PathBuf, command: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("leaf at {path} exceeds the chunk budget and is not a string")]
    UnsplittableLeaf { path: String },

    #[error("report is not a JSON object after list normalization")]
    NotAnObject,

    #[error("sample {id} incomplete: missing chunk ordinal {ordinal}")]
    IncompleteSample { id: String, ordinal: usize },

    #[error("embedding provider unavailable after {attempts} attempts: {msg}")]
    ProviderUnavailable { attempts: usize, msg: String },

    #[error("embedding protocol error: {0}")]
    Protocol(String),

    #[error("sample {id} failed to embed: {msg}")]
    SampleFailed { id: String, msg: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("bad artifact {path}: {msg}")]
    BadArtifact { path: PathBuf, msg: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code for the CLI: 2 config, 3 missing artifact, 4 provider, 5 numerical, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidK { .. } => 2,
            Error::MissingArtifact { .. } | Error::BadArtifact { .. } => 3,
            Error::ProviderUnavailable { .. } | Error::Protocol(_) | Error::SampleFailed { .. } => {
                4
            }
            Error::Numerical(_) => 5,
            _ => 1,
        }
    }
}
