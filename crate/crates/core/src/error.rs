use thiserror::Error;

use crate::witness::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedSpec(String),

    #[error("simplicial identity d_{i} d_{j} = d_{} d_{i} fails on cell `{cell}`", .j - 1)]
    SimplicialIdentityViolation { cell: String, i: usize, j: usize },

    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("pushout needs at least one injective leg")]
    NonInjectiveGlue,

    #[error("dimension {requested} exceeds the configured bound {bound}")]
    DimBudgetExceeded { requested: usize, bound: usize },

    #[error("search budget of {0} nodes exhausted")]
    SearchBudgetExceeded(u64),

    #[error("object is not fibrant: {reason}")]
    NotFibrant {
        reason: String,
        witness: Option<Witness>,
    },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("vertex `{0}` not found")]
    VertexNotFound(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("cannot enumerate: {0}")]
    EnumerationImpossible(String),

    #[error("in section `{object}`: {source}")]
    Section {
        object: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedSpec(msg.into())
    }

    pub(crate) fn in_section(object: &str, err: Error) -> Self {
        Error::Section {
            object: object.to_string(),
            source: Box::new(err),
        }
    }

    /// True for errors caused by a search or enumeration running out of budget.
    pub fn is_budget(&self) -> bool {
        match self {
            Error::SearchBudgetExceeded(_)
            | Error::DimBudgetExceeded { .. }
            | Error::EnumerationImpossible(_) => true,
            Error::Section { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}
