use thiserror::Error;

use crate::series::CoefficientDomain;

/// Errors raised by the series, arithmetic and congruence layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient domains differ: {left} vs {right}")]
    DomainMismatch {
        left: CoefficientDomain,
        right: CoefficientDomain,
    },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("constant term {constant} is not a unit in {domain}")]
    NonUnitConstant {
        constant: String,
        domain: CoefficientDomain,
    },

    #[error("cannot reduce {from} to {to}")]
    IncompatibleReduction {
        from: CoefficientDomain,
        to: CoefficientDomain,
    },

    #[error("dissection residue {r} must be below step {s} (and step >= 1)")]
    InvalidDissection { r: usize, s: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("side condition failed: {0}")]
    SideCondition(String),

    #[error("unknown family or identity id `{0}`")]
    UnknownId(String),

    #[error("pod table covers indices up to {have}, but {need} is required")]
    InsufficientCoverage { have: u64, need: u64 },

    #[error("two routes to the same table disagree first at index {index}")]
    RouteMismatch { index: usize },

    #[error("index arithmetic overflowed: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
