use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A value failed one of the structural invariants of its type.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("matrix has a negative eigenvalue {0:e}")]
    Negative(f64),

    #[error("POVM elements do not sum to identity (deviation {0:e})")]
    IncompletePovm(f64),

    #[error("ensemble probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
