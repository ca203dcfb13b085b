use thiserror::Error;

/// Errors produced by the numerical and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Adaptive quadrature hit its depth limit before meeting the tolerance.
    /// The best available estimate is kept so callers can decide what to do.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    NonConvergence { estimate: f64, error_bound: f64 },

    #[error("enumeration budget exceeded: {required} states requested, limit {limit}")]
    BudgetExceeded { required: u128, limit: u128 },

    #[error("insufficient samples: {got} available, at least {needed} required")]
    InsufficientSamples { got: usize, needed: usize },

    #[error("unsupported Bessel order {0} (only 1 and 3 are implemented)")]
    UnsupportedOrder(u32),

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("empty eavesdropper region")]
    EmptyRegion,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
