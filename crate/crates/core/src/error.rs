use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field F_{order} is too large for table-driven arithmetic (limit {limit})")]
    FieldTooLarge { order: u64, limit: u64 },

    #[error("|{group}| = {order} exceeds the size guard {guard}")]
    GroupTooLarge { group: String, order: u128, guard: u64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("character table verification failed: {0}")]
    TableVerification(String),

    #[error("class data mismatch: {0}")]
    ClassMismatch(String),

    #[error("{0} is not a homomorphism on the subgroup")]
    NotAHomomorphism(String),

    #[error("the Whittaker character is degenerate: component {0} is trivial")]
    DegenerateCharacter(usize),

    #[error("row {0} is not conjugate self-dual")]
    NotConjugateSelfDual(usize),
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
