//! Maximum bipartite matching that favours agents earlier in a priority list.

/// Matches agents to goods along `edges`, committing agents one at a time in
/// the given order. An agent is committed iff an augmenting path exists that
/// keeps every earlier committed agent matched, so the result is a
/// maximum-cardinality matching whose matched set is lexicographically best
/// for the order.
///
/// `edges(agent)` lists the goods the agent may take; goods are tried in the
/// order listed. Returns `(agent, good)` pairs in priority order.
pub fn prioritized_max_matching<F>(agents: &[usize], n_goods: usize, edges: F) -> Vec<(usize, usize)>
where
    F: Fn(usize) -> Vec<usize>,
{
    let adj: Vec<Vec<usize>> = agents.iter().map(|&a| edges(a)).collect();
    // owner[g] = slot into `agents` currently holding g
    let mut owner: Vec<Option<usize>> = vec![None; n_goods];
    let mut matched: Vec<Option<usize>> = vec![None; agents.len()];
    for slot in 0..agents.len() {
        let mut visited = vec![false; n_goods];
        augment(slot, &adj, &mut owner, &mut matched, &mut visited);
    }
    agents
        .iter()
        .zip(&matched)
        .filter_map(|(&a, g)| g.map(|g| (a, g)))
        .collect()
}

fn augment(
    slot: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    matched: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &g in &adj[slot] {
        if visited[g] {
            continue;
        }
        visited[g] = true;
        let free = match owner[g] {
            None => true,
            Some(other) => augment(other, adj, owner, matched, visited),
        };
        if free {
            owner[g] = Some(slot);
            matched[slot] = Some(g);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_goes_to_first_in_order() {
        let m = prioritized_max_matching(&[0, 1], 1, |_| vec![0]);
        assert_eq!(m, vec![(0, 0)]);
    }

    #[test]
    fn augmenting_path_reassigns() {
        let m = prioritized_max_matching(&[0, 1], 2, |a| if a == 0 { vec![0, 1] } else { vec![0] });
        assert_eq!(m, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn no_edges() {
        assert!(prioritized_max_matching(&[0, 1, 2], 3, |_| vec![]).is_empty());
    }

    #[test]
    fn priority_beats_cardinality_of_later_agents() {
        // Agent 2 first: it takes g0, and agent 0 (only g0) stays unmatched,
        // while agent 1 still gets g1.
        let edges = |a: usize| match a {
            0 => vec![0],
            1 => vec![0, 1],
            _ => vec![0],
        };
        let m = prioritized_max_matching(&[2, 1, 0], 2, edges);
        assert_eq!(m, vec![(2, 0), (1, 1)]);
    }
}
