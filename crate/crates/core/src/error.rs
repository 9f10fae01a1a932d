use thiserror::Error;

use crate::category::LawViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: a partition, coloring, structure, or query that does
    /// not satisfy its invariants.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A category or functor table that breaks a law.
    #[error("{0}")]
    Law(#[from] LawViolation),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("ground sizes differ: {0} vs {1}")]
    GroundMismatch(usize, usize),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("category is not all-mono: {0}")]
    NotMono(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::Budget {
            what: what.into(),
            needed,
            limit,
        }
    }

    /// True for errors that reject the input (as opposed to resource limits).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_)
                | Error::Law(_)
                | Error::UnknownObject(_)
                | Error::UnknownMorphism(_)
                | Error::GroundMismatch(..)
                | Error::NotMono(_)
                | Error::Json(_)
        )
    }
}
