use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Input failed a numerical precondition; `deviation` is the measured violation.
    #[error("precondition `{invariant}` violated: deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    Precondition {
        invariant: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("parameter `{name}` = {value} outside {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("family `{family}` requires parameter `{name}`")]
    MissingParameter {
        family: &'static str,
        name: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative decomposition did not converge.
    #[error("{routine} did not converge on a {rows}x{cols} matrix (frobenius norm {frobenius:e}, max |entry| {max_abs:e})")]
    NonConvergence {
        routine: &'static str,
        rows: usize,
        cols: usize,
        frobenius: f64,
        max_abs: f64,
    },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
