use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval ({a}, {b}): need 0 < a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("x = {x} is outside the domain ({lo}, {hi}) of {family}")]
    OutsideDomain {
        family: String,
        x: f64,
        lo: f64,
        hi: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integrand returned a non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("quadrature did not converge: estimate {value}, error estimate {error_estimate}")]
    NonConvergence { value: f64, error_estimate: f64 },

    #[error("invalid function spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
