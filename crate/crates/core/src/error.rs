use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the expansion machinery.
///
/// Indices reported in errors are 1-based term positions, matching the
/// numbering of the series.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("base {q} is not allowed: every base must be at least 2")]
    InvalidBase { q: u64 },

    #[error("a Q-system needs a non-empty period")]
    EmptyPeriod,

    #[error("{x} lies below the lower bound {lower}")]
    BelowLowerBound {
        x: Box<Rational>,
        lower: Box<Rational>,
    },

    #[error("{x} lies above the upper bound {upper}")]
    AboveUpperBound {
        x: Box<Rational>,
        upper: Box<Rational>,
    },

    #[error("digit {digit} at index {index} is not admissible for base {q}")]
    Inadmissible { index: usize, digit: u64, q: u64 },

    #[error("period of length {period} after preperiod {preperiod} is not aligned with the base schedule")]
    Misaligned { preperiod: usize, period: usize },

    #[error("positive-series path requires {0}")]
    NotPositive(&'static str),

    #[error("internal consistency violated: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}
