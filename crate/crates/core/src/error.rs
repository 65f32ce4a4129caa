use thiserror::Error;

/// Errors raised anywhere in the clustering engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("size mismatch: expected {expected} vertices, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("orientation mismatch: {0}")]
    Orientation(String),

    #[error(
        "exact engine refuses a {n}-vertex instance (size cap {cap}); \
         use the greedy or local-search engine, or raise MATCHCLUST_SIZE_CAP"
    )]
    SizeCapExceeded { n: usize, cap: usize },

    #[error("infeasible matching request: {0}")]
    Infeasible(String),

    #[error("edge ({u}, {v}) has non-integer weight {weight}; the k-sized reduction needs integer weights")]
    NonIntegerWeight { u: usize, v: usize, weight: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
