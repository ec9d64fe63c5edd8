use thiserror::Error;

/// Errors produced by ring arithmetic, witness search and polynomial
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ring {0} is infinite")]
    InfiniteRing(String),

    #[error("element does not belong to ring {ring}: {detail}")]
    WrongRing { ring: String, detail: String },

    #[error("point is not primitive")]
    NotPrimitive,

    #[error("operation unsupported: {0}")]
    Unsupported(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),

    #[error("no Bezout certificate for a combination that must generate the unit ideal")]
    BezoutFailure,

    #[error("witness search exhausted after {bound} steps")]
    WitnessExhausted { bound: u64 },

    #[error("constructed polynomial would have {terms} terms (limit {limit})")]
    SizeLimit { terms: u128, limit: u128 },

    #[error("constructed polynomial would have about {digits} coefficient characters (limit {limit})")]
    CoefficientLimit { digits: u128, limit: u128 },

    #[error("internal identity failed: {0}")]
    Identity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}
