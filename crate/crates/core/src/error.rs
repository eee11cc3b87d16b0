use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested size is beyond what the dense routines are meant to handle.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("phase solver did not reach tolerance {tol:e} after {restarts} restarts (best {best:e})")]
    NoConvergence {
        tol: f64,
        best: f64,
        restarts: usize,
        best_phases: Vec<f64>,
    },

    #[error("precision limit: {0}")]
    PrecisionLimit(String),

    /// A ratio estimator whose denominator is numerically zero.
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
