use thiserror::Error;

/// Errors raised by the hdv engine.
#[derive(Debug, Error)]
pub enum HdvError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("symbol name must not be empty")]
    EmptyName,

    #[error("symbol name {0:?} is reserved")]
    ReservedName(String),

    #[error("component {value} at index {index} is not bipolar")]
    NotBipolar { index: usize, value: i64 },

    #[error("accumulator is empty")]
    EmptyAccumulator,

    #[error("accumulator overflow: count would exceed {limit}")]
    Overflow { limit: u64 },

    #[error("codebook is empty")]
    EmptyCodebook,

    #[error("symbol {name:?} is not registered in the {kind} codebook")]
    Unregistered { name: String, kind: String },

    #[error("incompatible {what}: {detail}")]
    Incompatible { what: &'static str, detail: String },

    #[error("duplicate {what} {name:?}")]
    Duplicate { what: &'static str, name: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("expected a prefix of {expected} actions, got {got}")]
    PrefixLength { expected: usize, got: usize },

    #[error("model has not been trained")]
    Untrained,

    #[error("no session has at least {n} events")]
    NoQualifyingSession { n: usize },

    #[error("invalid window length {0}; need at least 2")]
    InvalidOrder(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid transition matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported file version {0}")]
    Version(u32),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HdvError>;
