//! Round-based matching of agents to high-valued goods, with freezing of
//! agents that took a good someone else valued high.

use num_traits::ToPrimitive;

use crate::allocation::Allocation;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::value::Value;

use super::matching::prioritized_max_matching;

/// What the algorithm knows about one agent: both values and which goods are high.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownBivalued {
    pub high: Value,
    pub low: Value,
    pub high_goods: Vec<bool>,
}

impl KnownBivalued {
    /// `floor(h / l - 1)`, the number of rounds an agent that took one of this
    /// agent's high goods stays frozen.
    pub fn freeze_length(&self) -> usize {
        let ratio = &self.high / &self.low;
        let f = ratio.floor() - num_bigint::BigInt::from(1);
        f.to_usize().unwrap_or(usize::MAX)
    }
}

/// Reads per-agent high/low structure from metadata, or infers it from rows
/// with exactly two distinct values.
pub fn known_valuations(instance: &Instance) -> Result<Vec<KnownBivalued>> {
    let m = instance.n_goods();
    if let Some(meta) = instance.bivalued() {
        return Ok(meta
            .iter()
            .enumerate()
            .map(|(i, bm)| KnownBivalued {
                high: bm.high.clone(),
                low: bm.low.clone(),
                high_goods: (0..m).map(|g| *instance.value(i, g) == bm.high).collect(),
            })
            .collect());
    }
    (0..instance.n_agents())
        .map(|i| {
            let row = instance.row(i);
            let mut distinct: Vec<&Value> = row.iter().collect();
            distinct.sort();
            distinct.dedup();
            match distinct.as_slice() {
                [lo, _] if lo.is_zero() => Err(Error::ZeroLowValue { agent: i }),
                [lo, hi] => Ok(KnownBivalued {
                    high: (*hi).clone(),
                    low: (*lo).clone(),
                    high_goods: row.iter().map(|v| v == *hi).collect(),
                }),
                _ => Err(Error::NotBivalued(format!(
                    "agent {i} has {} distinct values and no h/l metadata",
                    distinct.len()
                ))),
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct MatchFreezeState {
    /// Rounds each agent still sits out.
    pub freeze: Vec<usize>,
    pub available: Vec<bool>,
    pub bundles: Vec<Vec<usize>>,
    /// Rounds in which each agent was frozen by someone.
    pub freeze_events: Vec<usize>,
}

impl MatchFreezeState {
    pub fn new(n: usize, m: usize) -> Self {
        MatchFreezeState {
            freeze: vec![0; n],
            available: vec![true; m],
            bundles: vec![Vec::new(); n],
            freeze_events: vec![0; n],
        }
    }

    pub fn pool_is_empty(&self) -> bool {
        !self.available.iter().any(|&a| a)
    }

    fn take_lowest_available(&mut self) -> Option<usize> {
        let g = self.available.iter().position(|&a| a)?;
        self.available[g] = false;
        Some(g)
    }

    /// True when some agent with a known valuation prefers `j`'s bundle to its own.
    fn is_envied(&self, j: usize, known: &[Option<KnownBivalued>]) -> bool {
        known.iter().enumerate().any(|(i, kb)| {
            let Some(kb) = kb else { return false };
            if i == j {
                return false;
            }
            let worth = |b: &[usize]| -> Value {
                b.iter().map(|&g| if kb.high_goods[g] { kb.high.clone() } else { kb.low.clone() }).sum()
            };
            worth(&self.bundles[j]) > worth(&self.bundles[i])
        })
    }

    /// One round for `participants`, whose entries in `known` must be set.
    pub fn round(&mut self, participants: &[usize], known: &[Option<KnownBivalued>]) {
        let mut unfrozen = Vec::new();
        for &i in participants {
            if self.freeze[i] > 0 {
                self.freeze[i] -= 1;
            } else {
                unfrozen.push(i);
            }
        }
        let kb = |i: usize| known[i].as_ref().expect("participant valuation is known");
        // Higher h/l first, ties by index.
        unfrozen.sort_by(|&a, &b| {
            let ra = &kb(a).high * &kb(b).low;
            let rb = &kb(b).high * &kb(a).low;
            rb.cmp(&ra).then(a.cmp(&b))
        });
        let available = &self.available;
        let matching = prioritized_max_matching(&unfrozen, available.len(), |i| {
            (0..available.len()).filter(|&g| available[g] && kb(i).high_goods[g]).collect()
        });
        let mut matched = vec![None; self.freeze.len()];
        for &(i, g) in &matching {
            self.bundles[i].push(g);
            self.available[g] = false;
            matched[i] = Some(g);
        }
        let mut frozen_now = vec![false; self.freeze.len()];
        // Unmatched agents nobody envies are served first: a good added to an
        // unenvied bundle cannot break EFX when the pool runs out mid-round.
        let envied: Vec<bool> = (0..self.freeze.len()).map(|j| self.is_envied(j, known)).collect();
        let mut rest: Vec<usize> = unfrozen.iter().copied().filter(|&i| matched[i].is_none()).collect();
        rest.sort_by_key(|&i| (envied[i], i));
        for i in rest {
            let Some(g) = self.take_lowest_available() else {
                break;
            };
            self.bundles[i].push(g);
            let len = kb(i).freeze_length();
            for &(j, gj) in &matching {
                if kb(i).high_goods[gj] {
                    // Several agents may freeze j in one round; the longest
                    // duration wins.
                    self.freeze[j] = self.freeze[j].max(len);
                    if len > 0 {
                        frozen_now[j] = true;
                    }
                }
            }
        }
        for (j, f) in frozen_now.into_iter().enumerate() {
            if f {
                self.freeze_events[j] += 1;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct MatchFreezeOutcome {
    pub allocation: Allocation,
    pub freeze_events: Vec<usize>,
    pub rounds: usize,
}

/// Full run over `participants` (default: everyone) until the pool is empty.
pub fn match_and_freeze(instance: &Instance, participants: Option<&[usize]>) -> Result<MatchFreezeOutcome> {
    let n = instance.n_agents();
    let m = instance.n_goods();
    let known: Vec<Option<KnownBivalued>> = known_valuations(instance)?.into_iter().map(Some).collect();
    let all: Vec<usize> = (0..n).collect();
    let participants = participants.unwrap_or(&all);
    let mut state = MatchFreezeState::new(n, m);
    let mut rounds = 0;
    if participants.is_empty() {
        return Ok(MatchFreezeOutcome {
            allocation: Allocation::from_bundles(state.bundles, m),
            freeze_events: state.freeze_events,
            rounds,
        });
    }
    while !state.pool_is_empty() {
        state.round(participants, &known);
        rounds += 1;
    }
    Ok(MatchFreezeOutcome {
        allocation: Allocation::from_bundles(state.bundles, m),
        freeze_events: state.freeze_events,
        rounds,
    })
}
