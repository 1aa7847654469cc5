//! Metered access to a hidden instance.
//!
//! Algorithms receive a [`QueryOracle`] and never the [`Instance`] itself. The
//! ranking profile is free; every distinct `(agent, good)` value lookup costs
//! one query for that agent.

use std::cell::Cell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::ranking::{build_ranking, PreferenceProfile};
use crate::value::Value;

/// Ordered record of answered queries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub entries: Vec<(usize, usize, Value)>,
}

impl Transcript {
    pub fn per_agent_counts(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for &(a, _, _) in &self.entries {
            if a < n {
                counts[a] += 1;
            }
        }
        counts
    }

    /// The recorded answer for `(agent, good)`, if it was queried.
    pub fn lookup(&self, agent: usize, good: usize) -> Option<&Value> {
        self.entries.iter().find(|(a, g, _)| *a == agent && *g == good).map(|(_, _, v)| v)
    }

    pub fn queried(&self, agent: usize, good: usize) -> bool {
        self.lookup(agent, good).is_some()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }
}

pub struct QueryOracle<'a> {
    hidden: &'a Instance,
    profile: PreferenceProfile,
    counts: Vec<usize>,
    answered: HashMap<(usize, usize), Value>,
    transcript: Transcript,
    budget: Option<usize>,
    // Test seam: counts reads of hidden values outside `query`.
    hidden_reads: Cell<usize>,
}

impl<'a> QueryOracle<'a> {
    pub fn new(hidden: &'a Instance) -> Self {
        QueryOracle {
            hidden,
            profile: build_ranking(hidden),
            counts: vec![0; hidden.n_agents()],
            answered: HashMap::new(),
            transcript: Transcript::default(),
            budget: None,
            hidden_reads: Cell::new(0),
        }
    }

    pub fn with_budget(hidden: &'a Instance, budget: usize) -> Self {
        let mut o = QueryOracle::new(hidden);
        o.budget = Some(budget);
        o
    }

    pub fn n_agents(&self) -> usize {
        self.hidden.n_agents()
    }

    pub fn n_goods(&self) -> usize {
        self.hidden.n_goods()
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    /// The value `v_agent(good)`. Repeated pairs are answered for free.
    pub fn query(&mut self, agent: usize, good: usize) -> Result<Value> {
        if agent >= self.n_agents() || good >= self.n_goods() {
            return Err(Error::QueryOutOfRange { agent, good });
        }
        if let Some(v) = self.answered.get(&(agent, good)) {
            return Ok(v.clone());
        }
        if let Some(budget) = self.budget {
            if self.counts[agent] + 1 > budget {
                return Err(Error::BudgetExceeded { agent, budget });
            }
        }
        let v = self.hidden.value(agent, good).clone();
        self.counts[agent] += 1;
        self.answered.insert((agent, good), v.clone());
        self.transcript.entries.push((agent, good, v.clone()));
        Ok(v)
    }

    /// Value of the good at zero-based `rank` in the agent's ranking.
    pub fn query_rank(&mut self, agent: usize, rank: usize) -> Result<Value> {
        let good = self.profile.ranking(agent)[rank];
        self.query(agent, good)
    }

    pub fn ordinal_view(&self) -> &PreferenceProfile {
        &self.profile
    }

    pub fn snapshot_counts(&self) -> Vec<usize> {
        self.counts.clone()
    }

    pub fn total_queries(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    /// Backdoor for test assertions only. Every call is counted so callers can
    /// check that algorithms never used it.
    pub fn peek_hidden(&self) -> &Instance {
        self.hidden_reads.set(self.hidden_reads.get() + 1);
        self.hidden
    }

    pub fn hidden_reads(&self) -> usize {
        self.hidden_reads.get()
    }
}
