use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Disjoint bundles of goods, one per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
    complete: bool,
}

/// One violated allocation invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AllocationIssue {
    AgentCount { expected: usize, found: usize },
    UnknownGood { agent: usize, good: usize },
    Overlap { good: usize, first: usize, second: usize },
    Completeness { claimed: bool, actual: bool },
}

impl fmt::Display for AllocationIssue {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            AllocationIssue::AgentCount { expected, found } => {
                write!(f, "expected {expected} bundles, found {found}")
            }
            AllocationIssue::UnknownGood { agent, good } => {
                write!(f, "agent {agent} holds unknown good {good}")
            }
            AllocationIssue::Overlap { good, first, second } => {
                write!(f, "good {good} allocated to both agent {first} and agent {second}")
            }
            AllocationIssue::Completeness { claimed, actual } => {
                write!(f, "allocation claims complete = {claimed} but is {actual}")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AllocationFile {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    /// Sorts each bundle and derives the completeness flag against `n_goods`.
    pub fn from_bundles(mut bundles: Vec<Vec<usize>>, n_goods: usize) -> Self {
        for b in &mut bundles {
            b.sort_unstable();
        }
        let mut seen = vec![false; n_goods];
        for &g in bundles.iter().flatten() {
            if g < n_goods {
                seen[g] = true;
            }
        }
        let complete = seen.iter().all(|&s| s);
        Allocation { bundles, complete }
    }

    /// Keeps the caller's completeness claim as-is; [`Allocation::validate`] checks it.
    pub fn with_claimed_completeness(bundles: Vec<Vec<usize>>, complete: bool) -> Self {
        Allocation { bundles, complete }
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn n_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Owner of each good, `None` for unallocated goods.
    pub fn owners(&self, n_goods: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n_goods];
        for (i, b) in self.bundles.iter().enumerate() {
            for &g in b {
                if g < n_goods {
                    owner[g] = Some(i);
                }
            }
        }
        owner
    }

    /// Every violated invariant, in a stable order.
    pub fn issues(&self, instance: &Instance) -> Vec<AllocationIssue> {
        let n = instance.n_agents();
        let m = instance.n_goods();
        let mut issues = Vec::new();
        if self.bundles.len() != n {
            issues.push(AllocationIssue::AgentCount { expected: n, found: self.bundles.len() });
        }
        let mut owner: Vec<Option<usize>> = vec![None; m];
        for (i, b) in self.bundles.iter().enumerate() {
            for &g in b {
                if g >= m {
                    issues.push(AllocationIssue::UnknownGood { agent: i, good: g });
                    continue;
                }
                match owner[g] {
                    Some(first) => {
                        issues.push(AllocationIssue::Overlap { good: g, first, second: i })
                    }
                    None => owner[g] = Some(i),
                }
            }
        }
        let actual = owner.iter().all(Option::is_some);
        if actual != self.complete {
            issues.push(AllocationIssue::Completeness { claimed: self.complete, actual });
        }
        issues
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        let issues = self.issues(instance);
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidAllocation(issues))
        }
    }

    /// Like [`Allocation::validate`] but ignores the completeness flag.
    pub fn validate_structure(&self, instance: &Instance) -> Result<()> {
        let issues: Vec<_> = self
            .issues(instance)
            .into_iter()
            .filter(|i| !matches!(i, AllocationIssue::Completeness { .. }))
            .collect();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidAllocation(issues))
        }
    }

    pub fn from_json_str(s: &str, n_goods: usize) -> Result<Self> {
        let file: AllocationFile = serde_json::from_str(s)?;
        Ok(Allocation::from_bundles(file.bundles, n_goods))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(AllocationFile { bundles: self.bundles.clone() })
            .expect("allocation serializes")
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

/// Checks disjointness, index bounds and the completeness flag.
pub fn validate(instance: &Instance, allocation: &Allocation) -> Result<()> {
    allocation.validate(instance)
}
