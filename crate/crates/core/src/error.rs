use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the interval where the quantity is defined or computable.
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// The fitted function returned a non-finite value at a Chebyshev node.
    #[error("function is not finite at node {index} (y = {y}): {value}")]
    Evaluation { index: usize, y: f64, value: f64 },

    #[error("series orders differ: {left} vs {right}")]
    Shape { left: usize, right: usize },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    /// Adaptive quadrature stopped before meeting its tolerance.
    #[error("quadrature missed tolerance {tolerance:e}: estimate {estimate} with error {error:e}")]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },
}

impl Error {
    pub(crate) fn out_of_range(what: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Error::OutOfRange {
            what: what.into(),
            value,
            lo,
            hi,
        }
    }
}
