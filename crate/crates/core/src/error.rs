use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{kind} index {index} out of range (size {len})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("duplicate {kind} label {label:?}")]
    DuplicateLabel { kind: &'static str, label: String },

    #[error("incidence has {found} entries in row {row}, expected {expected}")]
    RaggedIncidence {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("context is not clarified; clarify it before {operation}")]
    NotClarified { operation: &'static str },

    #[error("context is not reduced; clarify and reduce it before {operation}")]
    NotReduced { operation: &'static str },

    #[error("selection does not belong to this context")]
    StaleSelection,

    #[error("reconstruction data does not match the context: {0}")]
    Mismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("concept set is not closed under meets")]
    NotMeetClosed,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
