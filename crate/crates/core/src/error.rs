use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("context has no {0}")]
    EmptyContext(&'static str),

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("unknown concept id {0}")]
    UnknownConcept(usize),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("invalid threshold {0}: minimum extent size must be at least 1")]
    InvalidThreshold(usize),

    #[error("concept {target} is not a cover neighbour of concept {current}")]
    NotAdjacent { current: usize, target: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed lattice document: {0}")]
    MalformedDocument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, used in HTTP error bodies and CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateName { .. } => "DuplicateName",
            Error::MalformedTable(_) => "MalformedTable",
            Error::EmptyContext(_) => "EmptyContext",
            Error::CapacityExceeded(_) => "CapacityExceeded",
            Error::InvalidSet(_) => "InvalidSet",
            Error::UnknownConcept(_) => "UnknownConcept",
            Error::UnknownAttribute(_) => "UnknownAttribute",
            Error::UnknownObject(_) => "UnknownObject",
            Error::InvalidThreshold(_) => "InvalidThreshold",
            Error::NotAdjacent { .. } => "NotAdjacent",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::MalformedDocument(_) => "MalformedDocument",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
