use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input too large: {what} (limit {limit})")]
    InputTooLarge { what: String, limit: usize },
    #[error("no factorable basis exists inside the span of the given quadrics")]
    NoProductBasis,
    #[error("elements belong to different groups")]
    MixedGroups,
    #[error("group of order at most 2")]
    GroupTooSmall,
    #[error("input is formally real; top degree need not exist")]
    FormallyRealInput,
    #[error("action is not free")]
    NotFree,
    #[error("no free direct factor of {n} circles found")]
    NoSubsetFound { n: usize },
    #[error("budget exceeded: {what} needs {needed}, budget {budget}")]
    BudgetExceeded {
        what: String,
        needed: u64,
        budget: u64,
    },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("k-invariants are linearly dependent")]
    DependentForms,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
