use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A group table fails an axiom; `witness` names the offending elements.
    #[error("group axiom `{axiom}` violated at witness {witness:?}")]
    GroupAxiom {
        axiom: &'static str,
        witness: (usize, usize, usize),
    },

    #[error("matrix is not hermitian: entry ({row}, {col}) deviates by {deviation:e}")]
    NonHermitian { row: usize, col: usize, deviation: f64 },

    #[error("quadrature did not converge after {nodes} nodes (last change {change:e})")]
    QuadratureNonConvergence { nodes: usize, change: f64 },

    #[error("eigenvalue solver did not converge: {0}")]
    EigenNonConvergence(String),

    #[error("degree {requested} exceeds the configured cap {cap}")]
    DegreeCapExceeded { requested: usize, cap: usize },

    #[error("derivative order {requested} exceeds the declared smoothness {cap}")]
    SmoothnessCapExceeded { requested: usize, cap: usize },

    #[error("non-finite kernel value: {0}")]
    NonFinite(String),

    /// A quantity that must be nonnegative for a positive definite input was negative.
    #[error("positivity violation: {0}")]
    PositivityViolation(String),
}

impl Error {
    /// True for failures of a numerical procedure rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. } | Error::EigenNonConvergence(_) | Error::NonFinite(_)
        )
    }
}
