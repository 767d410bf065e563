use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GucError>;

#[derive(Debug, Error)]
pub enum GucError {
    #[error("{op}: shape mismatch between {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("cannot place {classes} disjoint {ones}-hot prototypes in {dim} dimensions")]
    InfeasibleSupport { classes: usize, dim: usize, ones: usize },

    #[error("prototype dimension {dim} is smaller than the class count {classes}")]
    PrototypeDimension { classes: usize, dim: usize },

    #[error("operation not supported for {0} prototypes")]
    UnsupportedKind(&'static str),

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("missing prototype set")]
    MissingPrototypes,

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("truncated file: {0}")]
    Truncated(String),

    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },

    #[error("class {class} has {count} samples, at least {needed} required")]
    ClassTooSmall { class: usize, count: usize, needed: usize },

    #[error("class count mismatch: {0}")]
    ClassCountMismatch(String),

    #[error("backward called with a cache from a stale forward pass")]
    StaleCache,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl GucError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        GucError::Io { path: path.into(), source }
    }
}
