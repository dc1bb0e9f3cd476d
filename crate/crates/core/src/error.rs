use thiserror::Error;

/// Errors raised by the geometry and analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("point set is not centrally symmetric: {0} has no antipode")]
    Asymmetric(String),

    #[error("degenerate polytope: {0}")]
    Degenerate(String),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("point lies outside the polytope")]
    OutsidePolytope,

    #[error("supporting functionals of the zero vector are undefined")]
    ZeroVector,

    #[error("point is not on the unit sphere (norm {0})")]
    NotOnSphere(String),

    #[error("operator is not normalized (norm {0})")]
    NotNormalized(String),

    #[error("{0} out of range")]
    OutOfRange(String),

    #[error("dimension {dim} exceeds the cap of {cap}; raise the cap to proceed")]
    CapExceeded { dim: usize, cap: usize },

    #[error("computation budget exhausted after {processed} of {total} inequalities")]
    BudgetExhausted { processed: usize, total: usize },

    #[error("construction not applicable: {0}")]
    Inapplicable(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for refusals caused by the dimension cap or the time budget.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::BudgetExhausted { .. }
        )
    }
}
