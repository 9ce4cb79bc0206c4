use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension {requested} out of range (max dimension {max})")]
    DimensionOutOfRange { requested: usize, max: usize },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("incomplete cover: vertex `{0}` is not assigned to any cluster")]
    IncompleteCover(String),

    #[error("simplex {0} has no positive assignment weight")]
    UncoveredSimplex(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::ShapeMismatch { expected: expected.to_string(), found: found.to_string() }
    }
}
