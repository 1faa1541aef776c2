use thiserror::Error;

/// Failure modes shared by every engine module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters outside the region where a formula is valid.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two independent routes to the same value disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// A request exceeded a configured size limit.
    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// Evaluation point has fewer coordinates than the partition has rows.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A hypergeometric term has a vanishing lower Pochhammer product.
    #[error("pole at partition {0}")]
    Pole(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Numerical breakdown in the Monte Carlo sampler.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
