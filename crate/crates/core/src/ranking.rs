use crate::error::{Error, Result};
use crate::instance::Instance;

/// Per-agent preference rankings over goods, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceProfile {
    rankings: Vec<Vec<usize>>,
    positions: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    /// Validates that every ranking is a permutation of `0..m`.
    pub fn new(rankings: Vec<Vec<usize>>) -> Result<Self> {
        let m = rankings.first().map_or(0, Vec::len);
        let mut positions = Vec::with_capacity(rankings.len());
        for (i, ranking) in rankings.iter().enumerate() {
            if ranking.len() != m {
                return Err(Error::InvalidInstance(format!("ranking {i} has the wrong length")));
            }
            let mut pos = vec![usize::MAX; m];
            for (p, &g) in ranking.iter().enumerate() {
                if g >= m || pos[g] != usize::MAX {
                    return Err(Error::InvalidInstance(format!(
                        "ranking {i} is not a permutation of 0..{m}"
                    )));
                }
                pos[g] = p;
            }
            positions.push(pos);
        }
        Ok(PreferenceProfile { rankings, positions })
    }

    pub fn n_agents(&self) -> usize {
        self.rankings.len()
    }

    pub fn n_goods(&self) -> usize {
        self.rankings.first().map_or(0, Vec::len)
    }

    pub fn ranking(&self, agent: usize) -> &[usize] {
        &self.rankings[agent]
    }

    /// Zero-based position of `good` in `agent`'s ranking.
    pub fn position(&self, agent: usize, good: usize) -> usize {
        self.positions[agent][good]
    }

    /// The agent's most preferred good among those marked available.
    pub fn top_available(&self, agent: usize, available: &[bool]) -> Option<usize> {
        self.rankings[agent].iter().copied().find(|&g| available[g])
    }

    /// Available goods in the agent's preference order.
    pub fn available_in_order<'a>(
        &'a self,
        agent: usize,
        available: &'a [bool],
    ) -> impl Iterator<Item = usize> + 'a {
        self.rankings[agent].iter().copied().filter(move |&g| available[g])
    }

    /// No ranking ever places a lower-valued good before a higher-valued one.
    pub fn is_consistent_with(&self, instance: &Instance) -> bool {
        self.n_agents() == instance.n_agents()
            && self.n_goods() == instance.n_goods()
            && self.rankings.iter().enumerate().all(|(i, ranking)| {
                ranking
                    .windows(2)
                    .all(|w| instance.value(i, w[0]) >= instance.value(i, w[1]))
            })
    }
}

/// Sorts each agent's goods by value, descending, breaking ties by ascending
/// good index.
pub fn build_ranking(instance: &Instance) -> PreferenceProfile {
    let rankings = (0..instance.n_agents())
        .map(|i| {
            let row = instance.row(i);
            let mut goods: Vec<usize> = (0..instance.n_goods()).collect();
            goods.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));
            goods
        })
        .collect();
    PreferenceProfile::new(rankings).expect("sorted indices form a permutation")
}
