//! Match&Freeze for agents whose valuation a few queries uncover, round-robin
//! for the rest, interleaved phase by phase.

use crate::allocation::Allocation;
use crate::elicitation::QueryOracle;
use crate::error::{Error, Result};
use crate::ordinal::trivial_allocation;
use crate::value::Value;

use super::match_freeze::{KnownBivalued, MatchFreezeState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transition {
    /// The value drops from `high` to `low` at ranking position `position`
    /// (zero-based, the first low good).
    Found { high: Value, low: Value, position: usize },
    /// The top `n` goods all have the same value.
    Uniform { value: Value },
}

/// Queries rank 1, then binary-searches the top `n` ranks for the first value
/// below it. At most `1 + ceil(log2 n)` queries.
pub fn discover_transition(oracle: &mut QueryOracle, agent: usize) -> Result<Transition> {
    let n = oracle.n_agents();
    let top = n.min(oracle.n_goods());
    let high = oracle.query_rank(agent, 0)?;
    let mut low: Option<Value> = None;
    let (mut lo, mut hi) = (1, top);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let v = oracle.query_rank(agent, mid)?;
        if v == high {
            lo = mid + 1;
            continue;
        }
        if v > high {
            return Err(Error::NotBivalued(format!(
                "agent {agent} values a lower-ranked good above its top good"
            )));
        }
        match &low {
            Some(l) if *l != v => {
                return Err(Error::NotBivalued(format!(
                    "agent {agent} has at least three distinct values: {high}, {l}, {v}"
                )))
            }
            _ => low = Some(v),
        }
        hi = mid;
    }
    match low {
        None => Ok(Transition::Uniform { value: high }),
        Some(l) if l.is_zero() => Err(Error::ZeroLowValue { agent }),
        Some(low) => Ok(Transition::Found { high, low, position: lo }),
    }
}

#[derive(Clone, Debug)]
pub struct MfrrOutcome {
    pub allocation: Allocation,
    /// Agents whose valuation was uncovered.
    pub matched_side: Vec<usize>,
    /// Agents served round-robin.
    pub round_robin_side: Vec<usize>,
    pub freeze_events: Vec<usize>,
    /// `(phase, agent, good)` for every assignment, in order.
    pub picks: Vec<(usize, usize, usize)>,
}

pub fn mfrr(oracle: &mut QueryOracle) -> Result<Allocation> {
    Ok(mfrr_detailed(oracle)?.allocation)
}

pub fn mfrr_detailed(oracle: &mut QueryOracle) -> Result<MfrrOutcome> {
    let n = oracle.n_agents();
    let m = oracle.n_goods();
    if m < n {
        return Ok(MfrrOutcome {
            allocation: trivial_allocation(n, m),
            matched_side: Vec::new(),
            round_robin_side: (0..n).collect(),
            freeze_events: vec![0; n],
            picks: (0..m).map(|g| (0, g, g)).collect(),
        });
    }
    let profile = oracle.ordinal_view().clone();
    let mut known: Vec<Option<KnownBivalued>> = vec![None; n];
    let mut matched_side = Vec::new();
    let mut round_robin_side = Vec::new();
    for i in 0..n {
        match discover_transition(oracle, i)? {
            Transition::Found { high, low, position } => {
                let mut high_goods = vec![false; m];
                for &g in &profile.ranking(i)[..position] {
                    high_goods[g] = true;
                }
                known[i] = Some(KnownBivalued { high, low, high_goods });
                matched_side.push(i);
            }
            Transition::Uniform { .. } => round_robin_side.push(i),
        }
    }

    let mut state = MatchFreezeState::new(n, m);
    let mut picks = Vec::new();
    let mut phase = 0;
    while !state.pool_is_empty() {
        let before: Vec<usize> = state.bundles.iter().map(Vec::len).collect();
        state.round(&matched_side, &known);
        for &i in &matched_side {
            if state.bundles[i].len() > before[i] {
                picks.push((phase, i, *state.bundles[i].last().expect("just assigned")));
            }
        }
        for &i in &round_robin_side {
            let Some(g) = profile.top_available(i, &state.available) else {
                break;
            };
            state.available[g] = false;
            state.bundles[i].push(g);
            picks.push((phase, i, g));
        }
        phase += 1;
    }
    Ok(MfrrOutcome {
        allocation: Allocation::from_bundles(state.bundles, m),
        matched_side,
        round_robin_side,
        freeze_events: state.freeze_events,
        picks,
    })
}
