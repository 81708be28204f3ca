use thiserror::Error;

/// Errors shared across the bound, characteristic, process, and Monte Carlo
/// layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A numeric argument is outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested moment does not exist (is infinite) for the model.
    #[error("infinite moment: {query} is not finite for model {model}")]
    InfiniteMoment { model: String, query: String },

    /// A model was paired with an operation whose hypotheses it violates
    /// (e.g. an asymmetric model with a conditionally-symmetric bound).
    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    /// An event specification is internally inconsistent or incompatible
    /// with the paired bound.
    #[error("invalid specification: {0}")]
    Spec(String),

    /// The numeric minimizer failed to bracket a minimum; the objective is
    /// not the convex exponent family it was promised.
    #[error("no bracket found after {0} doublings; objective is not convex-coercive")]
    NoBracket(usize),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
