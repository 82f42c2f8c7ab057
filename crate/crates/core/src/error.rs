use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The value lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} = {value} (limit {limit})")]
    Capacity {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("pole at {0}")]
    Pole(String),

    #[error("root finder did not converge after {iterations} iterations (max step {max_step:e}, residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        max_step: f64,
        residual: f64,
    },

    #[error("construction could not be certified: measured {measured:e}, bound {bound:e}")]
    Construction { measured: f64, bound: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
