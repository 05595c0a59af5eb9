use thiserror::Error;

/// Errors raised by the spectral pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// Cholesky factorization hit a non-positive pivot.
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    /// An iterative eigen-solver exceeded its iteration cap.
    #[error("{solver} did not converge after {iterations} iterations")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
    },

    /// Matrix operands disagree in shape.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The recursion polynomial needs a nonzero quartic coupling.
    #[error("u2 = 0 makes the recursion degenerate; use the Poschl-Teller spectrum instead")]
    DegenerateRecursion,

    /// Too few usable samples on a parameter curve.
    #[error("parameter curve {curve} has only {points} usable samples (need at least 4)")]
    SparseCurve { curve: usize, points: usize },

    /// Interpolation table hit a zero denominator.
    #[error("continued-fraction interpolation is degenerate at node {0}")]
    DegenerateInterpolant(usize),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
