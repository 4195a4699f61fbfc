use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("{0} is not a subfield order of {1}")]
    NotASubfield(u64, String),

    #[error("fields are not in a tower relation: {0} and {1}")]
    NotATower(String, String),

    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),

    #[error("size bound exceeded: {what} needs {needed}, bound is {bound}")]
    BoundExceeded { what: String, needed: u64, bound: u64 },

    #[error("singular matrix where an invertible one is required")]
    SingularMatrix,

    #[error("malformed composition {0:?} of {1}")]
    MalformedComposition(Vec<usize>, usize),

    #[error("class functions live on different groups: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("invalid involution: {0}")]
    InvalidInvolution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal defect: {0}")]
    Defect(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
