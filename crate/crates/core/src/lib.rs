//! Approximate-EFX allocation of indivisible goods when agents reveal their
//! preference rankings for free and exact values only through counted queries.

pub mod adversarial;
pub mod allocation;
pub mod bivalued;
pub mod elicitation;
pub mod enclosure;
pub mod error;
pub mod fullinfo;
pub mod harness;
pub mod instance;
pub mod metrics;
pub mod ordinal;
pub mod query_enhanced;
pub mod ranking;
pub mod value;

pub use allocation::{validate, Allocation, AllocationIssue};
pub use elicitation::{QueryOracle, Transcript};
pub use error::{Error, Result};
pub use instance::{BivaluedMeta, Instance};
pub use metrics::{alpha_ef1, alpha_efx, evaluate, Binding, FairnessReport};
pub use ranking::{build_ranking, PreferenceProfile};
pub use value::Value;
