use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{path}: line {line}: cannot parse `{content}` as a real number")]
    ParseLine {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("{path}: truncated binary data, {trailing} trailing byte(s) at byte offset {offset}")]
    TruncatedBinary {
        path: PathBuf,
        offset: usize,
        trailing: usize,
    },

    #[error("{path}: file contains no samples")]
    EmptyFile { path: PathBuf },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("segment [{offset}, {end}) exceeds available length {available}")]
    OutOfRange {
        offset: usize,
        end: usize,
        available: usize,
    },

    #[error("no spike found: peak magnitude {peak} below threshold {threshold}")]
    NoSpike { peak: f64, threshold: f64 },

    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("solver produced a non-finite iterate at iteration {iteration}")]
    NonFiniteIterate { iteration: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn mismatch(context: &'static str, left: impl ToString, right: impl ToString) -> Self {
        Error::DimensionMismatch {
            context,
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}
