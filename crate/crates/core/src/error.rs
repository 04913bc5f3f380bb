use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Matrix or vector dimensions do not conform.
    #[error("shape error: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    /// A basis for a Lagrangian does not have full column rank.
    #[error("columns span a subspace of dimension {rank}, expected {expected}")]
    NotASubspace { rank: usize, expected: usize },

    /// The column span of a basis is not isotropic for the symplectic form.
    #[error("column span is not isotropic for the symplectic form")]
    NotIsotropic,

    /// A computation would exceed its configured size cap.
    #[error("resource cap exceeded: {what} needs more than {cap}")]
    Resource { what: String, cap: usize },

    /// A mathematical statement being checked turned out false.
    #[error("verification failure: {0}")]
    Verification(String),

    /// A witness search over the field found nothing.
    #[error("witness unavailable: {0}")]
    WitnessUnavailable(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Two independent formulations of the same predicate disagree.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn shape(expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::Shape {
            expected: expected.into(),
            got: got.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
