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

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate range: min {min} must be strictly below max {max}")]
    DegenerateRange { min: f64, max: f64 },

    #[error("duplicate key {0}")]
    DuplicateKey(String),

    #[error("tagger output has no role for sentence {index} of paper {paper_id}")]
    MissingTag { paper_id: String, index: usize },

    #[error("statistic undefined: {0}")]
    Undefined(String),

    #[error("control matrix is rank deficient; collinear columns: {}", .0.join(", "))]
    RankDeficient(Vec<String>),

    #[error("unknown subfield tag {tag:?}; nearest known tags: {}", .nearest.join(", "))]
    UnknownTag { tag: String, nearest: Vec<String> },

    #[error("name {name:?} refused: {reason}")]
    NameRefused { name: String, reason: &'static str },

    #[error("stage `{stage}` is missing or stale: {detail}")]
    Stage { stage: String, detail: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag used in CLI error summaries.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Invalid(_) => "invalid",
            Error::DegenerateRange { .. } => "degenerate_range",
            Error::DuplicateKey(_) => "duplicate_key",
            Error::MissingTag { .. } => "missing_tag",
            Error::Undefined(_) => "undefined",
            Error::RankDeficient(_) => "rank_deficient",
            Error::UnknownTag { .. } => "unknown_tag",
            Error::NameRefused { .. } => "name_refused",
            Error::Stage { .. } => "stage",
            Error::Config(_) => "config",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
