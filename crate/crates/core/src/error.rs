use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// No grid entry produced δ ∈ (0,1). Carries the best (δ, L) seen and
    /// the pair that pinned δ for it.
    #[error(
        "no certificate: best delta={best_delta} at L={best_l}, worst pair x={:?} y={:?}",
        worst_pair.0, worst_pair.1
    )]
    NoCertificate {
        best_delta: f64,
        best_l: f64,
        worst_pair: (Vec<f64>, Vec<f64>),
    },

    #[error("empty fixed-point set: no seed converged")]
    EmptyFixedPointSet,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
