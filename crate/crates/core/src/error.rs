use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected at construction time: a parameter violates its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A provably terminating loop ran past its guard; indicates an
    /// implementation bug or a degenerate configuration, not a sampling failure.
    #[error("iteration cap exceeded in {context} after {cap} iterations")]
    IterationCap { context: &'static str, cap: u64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
