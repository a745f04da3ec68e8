use thiserror::Error;

/// Errors surfaced by validation, capacity limits, and numeric guards.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must live in the same ambient dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An argument is outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact enumeration would exceed the configured term budget.
    #[error("term budget exceeded: {terms} terms needed, budget {budget}; use a subsampled estimator or raise the budget")]
    BudgetExceeded { terms: u128, budget: u128 },

    /// An exact integer count does not fit in u128.
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    /// Reading or writing experiment artifacts failed.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A config file could not be parsed.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
