//! Zero-query algorithms that read only the ranking profile.

use crate::allocation::Allocation;
use crate::elicitation::QueryOracle;

/// Good `g` to agent `g`; the rule for instances with fewer goods than agents.
pub fn trivial_allocation(n: usize, m: usize) -> Allocation {
    debug_assert!(m <= n);
    let bundles = (0..n).map(|i| if i < m { vec![i] } else { Vec::new() }).collect();
    Allocation::from_bundles(bundles, m)
}

/// Round-robin picking. `participants` defaults to every agent in ascending
/// order and `pool` to every good. Agents outside `participants` receive empty
/// bundles; goods outside `pool` stay unallocated.
pub fn round_robin(
    oracle: &QueryOracle,
    participants: Option<&[usize]>,
    pool: Option<&[usize]>,
) -> Allocation {
    let n = oracle.n_agents();
    let m = oracle.n_goods();
    let all: Vec<usize> = (0..n).collect();
    let participants = participants.unwrap_or(&all);
    let mut available = vec![pool.is_none(); m];
    if let Some(pool) = pool {
        for &g in pool {
            available[g] = true;
        }
    }
    let bundles = round_robin_picks(oracle, participants, &mut available);
    Allocation::from_bundles(bundles, m)
}

/// Runs round-robin over the goods marked available, consuming them.
pub(crate) fn round_robin_picks(
    oracle: &QueryOracle,
    participants: &[usize],
    available: &mut [bool],
) -> Vec<Vec<usize>> {
    let profile = oracle.ordinal_view();
    let mut bundles = vec![Vec::new(); oracle.n_agents()];
    let mut left = available.iter().filter(|&&a| a).count();
    if participants.is_empty() {
        return bundles;
    }
    // Each agent's pointer into its ranking only moves forward.
    let mut cursor = vec![0usize; oracle.n_agents()];
    'rounds: loop {
        for &i in participants {
            if left == 0 {
                break 'rounds;
            }
            let ranking = profile.ranking(i);
            while !available[ranking[cursor[i]]] {
                cursor[i] += 1;
            }
            let g = ranking[cursor[i]];
            available[g] = false;
            bundles[i].push(g);
            left -= 1;
        }
    }
    bundles
}

/// One round-robin pass for all agents but the last, who takes the rest.
pub fn rrla(oracle: &QueryOracle) -> Allocation {
    let order: Vec<usize> = (0..oracle.n_agents()).collect();
    rrla_with_order(oracle, &order)
}

/// `order` is a permutation of the agents; its last entry receives the remainder.
pub fn rrla_with_order(oracle: &QueryOracle, order: &[usize]) -> Allocation {
    let n = oracle.n_agents();
    let m = oracle.n_goods();
    if m < n {
        return trivial_allocation(n, m);
    }
    let profile = oracle.ordinal_view();
    let mut available = vec![true; m];
    let mut bundles = vec![Vec::new(); n];
    let (&last, first) = order.split_last().expect("at least one agent");
    for &i in first {
        let g = profile.top_available(i, &available).expect("m >= n leaves a good");
        available[g] = false;
        bundles[i].push(g);
    }
    bundles[last] = (0..m).filter(|&g| available[g]).collect();
    Allocation::from_bundles(bundles, m)
}
