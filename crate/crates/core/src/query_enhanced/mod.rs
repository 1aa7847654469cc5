//! Algorithms that spend a bounded number of value queries per agent.

pub mod prr;
pub mod virtual_efx;

pub use prr::{
    prr, tradeoff_bound, tradeoff_lambda, tradeoff_params, two_query, two_query_params, PRRParams,
};
pub use virtual_efx::{
    bucketize, query_ceiling, thresholds, virtual_efx, virtual_efx_bound, AgentBuckets,
    VirtualEfxOutcome, VirtualValuation,
};
