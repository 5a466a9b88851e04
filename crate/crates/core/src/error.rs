use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("degenerate eigenvector: {0}")]
    Degenerate(String),
    #[error("singular point: {0}")]
    Singularity(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("insufficient precision: {needed} bits needed, {have} available")]
    Precision { needed: usize, have: usize },
}

impl Error {
    /// True for errors caused by the caller's inputs rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::InvalidMode(_) | Error::Range(_))
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
