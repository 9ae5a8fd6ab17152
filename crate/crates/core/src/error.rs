use thiserror::Error;

/// Errors raised by chain operations and instance constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Source/target objects of two maps do not line up.
    #[error("cannot compose: {0}")]
    Composition(String),

    /// A transpose was requested for a map that does not satisfy the hom condition.
    #[error("not a morphism: {0}")]
    NotAHom(String),

    /// Malformed input data (a table with a missing entry, a weight outside [0,1], ...).
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NonHermitian(f64),

    #[error("matrix has negative spectrum (min eigenvalue {0:e})")]
    NegativeSpectrum(f64),

    /// The instance has no orthocomplement, so asserts and instruments are undefined.
    #[error("instance `{0}` has no orthocomplement on predicates")]
    NoOrthocomplement(&'static str),

    #[error("case generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
