use thiserror::Error;

/// Errors raised by the numeric, rank-one, oracle and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Input is degenerate for the requested quantity (zero vector, zero operator).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("gram weight is not hermitian positive definite: {0}")]
    NotPositiveDefinite(String),

    /// A quantity that is nonnegative analytically came out clearly negative.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit_interval(name: &str, q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {q} is not in [0, 1]")))
    }
}
