use thiserror::Error;

use crate::allocation::AllocationIssue;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse value `{0}`")]
    Parse(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid allocation: {}", join_issues(.0))]
    InvalidAllocation(Vec<AllocationIssue>),

    #[error("query out of range: agent {agent}, good {good}")]
    QueryOutOfRange { agent: usize, good: usize },

    #[error("query budget of {budget} exceeded for agent {agent}")]
    BudgetExceeded { agent: usize, budget: usize },

    #[error("black-box allocator returned an invalid allocation: {0}")]
    BlackboxInvalid(String),

    #[error("parameter out of domain: {0}")]
    ParamDomain(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumerating {n}^{m} allocations exceeds the limit of {limit}")]
    TooLarge { n: usize, m: usize, limit: u64 },

    #[error("not bivalued: {0}")]
    NotBivalued(String),

    #[error("agent {agent} has a zero low value")]
    ZeroLowValue { agent: usize },

    #[error("inconsistent transcript: {0}")]
    InconsistentTranscript(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input rather than by a failed run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::InvalidInstance(_)
                | Error::InvalidAllocation(_)
                | Error::ParamDomain(_)
                | Error::Domain(_)
                | Error::NotBivalued(_)
                | Error::ZeroLowValue { .. }
                | Error::InconsistentTranscript(_)
                | Error::UnknownAlgorithm(_)
                | Error::Json(_)
        )
    }
}

fn join_issues(issues: &[AllocationIssue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
