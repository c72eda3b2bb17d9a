use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge after {iterations} iterations (best residuals {residuals:?})")]
    Convergence {
        iterations: usize,
        residuals: Vec<f64>,
    },

    /// The number of (numerically) zero eigenvalues differs from what the
    /// physics predicts. This is a model failure, not a numerics failure.
    #[error("kernel dimension mismatch: expected {expected}, found {found} ({detail})")]
    KernelDimension {
        expected: usize,
        found: usize,
        detail: String,
    },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("linear algebra failure: {0}")]
    LinAlg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
