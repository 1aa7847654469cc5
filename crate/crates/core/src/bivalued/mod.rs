//! Algorithms for instances where each agent values every good at one of two
//! personal values `h_i > l_i > 0`.

pub mod match_freeze;
pub mod matching;
pub mod mfrr;

pub use match_freeze::{
    known_valuations, match_and_freeze, KnownBivalued, MatchFreezeOutcome, MatchFreezeState,
};
pub use matching::prioritized_max_matching;
pub use mfrr::{discover_transition, mfrr, mfrr_detailed, MfrrOutcome, Transition};

pub use crate::query_enhanced::prr::two_query as two_query_bivalued;
