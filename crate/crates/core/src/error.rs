use thiserror::Error;

use crate::exact::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: Rational, lo: Rational, hi: Rational },

    #[error("domains differ: [{0}, {1}] vs [{2}, {3}]")]
    DomainMismatch(Rational, Rational, Rational, Rational),

    #[error("invalid piecewise-linear function: {0}")]
    InvalidPl(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("requested level {requested} exceeds the configured limit {limit}")]
    ResourceLimit { requested: u32, limit: u32 },

    #[error("margin not certified: {0}")]
    MarginNotCertified(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate scale range: {0}")]
    DegenerateScales(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
