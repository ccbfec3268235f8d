use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical integral failed to reach its tolerance.
    #[error("quadrature did not converge: {reason} (partial value {partial:e}, error estimate {abs_error:e})")]
    Quadrature {
        reason: String,
        partial: f64,
        abs_error: f64,
        n_evals: usize,
    },

    /// Two quadrature nodes coincide, so the kernel is singular off the diagonal.
    #[error("sphere grid nodes {0} and {1} coincide")]
    NodeCollision(usize, usize),

    /// The radial grid is too coarse for the requested states.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// Invalid configuration or argument combination.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
