use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not invertible over integers: constant term {0}")]
    NotInvertible(BigInt),

    #[error("comparison order {requested} exceeds available order {available}")]
    OrderExceeded { requested: usize, available: usize },

    #[error("not a discriminant: {0}")]
    NotADiscriminant(i64),

    #[error("not a fundamental discriminant: {0}")]
    NotFundamental(i64),

    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("theorem does not apply to n = {0}")]
    TheoremDoesNotApply(u64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sample too close to pole: {0}")]
    PoleProximity(String),

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
