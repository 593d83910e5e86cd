//! Error type shared by all modules.

/// Failure modes of the solver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// A precondition tied to the validity of the first-order /
    /// narrow-spread approximations was violated.
    #[error("approximation regime violated: {0}")]
    RegimeViolation(String),

    /// Fock-space truncation cannot certify the requested tail bound.
    #[error("truncation too aggressive (tail mass {tail:e}); use n_max >= {required}")]
    Truncation { tail: f64, required: usize },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("grid does not cover the populated sidebands: {0}")]
    GridTooNarrow(String),

    /// Inputs leave the domain where the first-order closed forms are
    /// physical (e.g. sideband weight >= 1/2).
    #[error("outside the first-order domain: {0}")]
    NumericDomain(String),

    #[error("weak value undefined: |<post|pre>| = {overlap:e} below {threshold:e}")]
    UndefinedWeakValue { overlap: f64, threshold: f64 },

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
