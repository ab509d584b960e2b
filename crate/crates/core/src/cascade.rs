//! Tipping-model dynamics: one-step activation, iteration to the fixed
//! point, seed verification, and a brute-force minimum-seed oracle for
//! desk-scale graphs.
//!
//! A node activates once at least `k_i` of its in-neighbors are active;
//! activation is irreversible. [`gamma`] propagates incrementally with
//! per-node counters so each edge is touched at most once, while
//! [`activate_once`] is the literal one-step definition and serves as the
//! slow reference the fast path is tested against.

use std::collections::BTreeSet;

use crate::decomp::SeedSet;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::thresholds::ThresholdAssignment;

/// Per-round activation record. `rounds[0]` is the seed; `rounds[t]` holds
/// the nodes newly activated at step `t`. Rounds follow the synchronous
/// definition: a node lands in round `t` iff it first has enough active
/// in-neighbors among rounds `0..t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeTrace {
    rounds: Vec<Vec<NodeId>>,
    total_activated: usize,
    converged_at: usize,
}

impl CascadeTrace {
    /// Newly activated nodes per round, each sorted ascending.
    pub fn rounds(&self) -> &[Vec<NodeId>] {
        &self.rounds
    }

    pub fn total_activated(&self) -> usize {
        self.total_activated
    }

    /// Index of the last round that activated anyone (0 for an inert seed).
    pub fn converged_at(&self) -> usize {
        self.converged_at
    }

    /// All activated nodes, sorted.
    pub fn activated_set(&self) -> Vec<NodeId> {
        let mut all: Vec<NodeId> = self.rounds.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

/// Outcome of [`verify_seed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    pub complete: bool,
    pub activated: usize,
    pub rounds: usize,
}

fn check_ids(g: &DirectedGraph, nodes: impl IntoIterator<Item = NodeId>) -> Result<()> {
    for v in nodes {
        if v as usize >= g.n() {
            return Err(Error::NodeOutOfRange {
                id: v as u64,
                n: g.n(),
            });
        }
    }
    Ok(())
}

/// One synchronous application of the activation rule: the input set plus
/// every node with at least `k_i` active in-neighbors.
pub fn activate_once(
    g: &DirectedGraph,
    k: &ThresholdAssignment,
    active: &BTreeSet<NodeId>,
) -> Result<BTreeSet<NodeId>> {
    check_ids(g, active.iter().copied())?;
    let mut next = active.clone();
    for v in 0..g.n() as NodeId {
        if next.contains(&v) {
            continue;
        }
        let live = g
            .in_neighbors(v)
            .iter()
            .filter(|u| active.contains(u))
            .count();
        if live >= k.get(v) as usize {
            next.insert(v);
        }
    }
    Ok(next)
}

/// Iterate activation to its fixed point, recording per-round increments.
///
/// Counter-driven: each edge is processed once, when its source activates,
/// so a full cascade costs O(n + m).
pub fn gamma(g: &DirectedGraph, k: &ThresholdAssignment, seed: &[NodeId]) -> Result<CascadeTrace> {
    check_ids(g, seed.iter().copied())?;
    let n = g.n();
    let mut active = vec![false; n];
    let mut live_count = vec![0u32; n];

    let mut seed_round: Vec<NodeId> = seed.to_vec();
    seed_round.sort_unstable();
    seed_round.dedup();
    for &v in &seed_round {
        active[v as usize] = true;
    }

    let mut rounds = vec![seed_round];
    let mut total = rounds[0].len();

    loop {
        let t = rounds.len();
        let mut next: Vec<NodeId> = Vec::new();
        if t == 1 {
            // zero-threshold nodes activate unconditionally on the first step
            for v in 0..n as NodeId {
                if !active[v as usize] && k.get(v) == 0 {
                    active[v as usize] = true;
                    next.push(v);
                }
            }
        }
        for &u in &rounds[t - 1] {
            for &v in g.out_neighbors(u) {
                if active[v as usize] {
                    continue;
                }
                live_count[v as usize] += 1;
                if live_count[v as usize] >= k.get(v) {
                    active[v as usize] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        total += next.len();
        rounds.push(next);
    }

    let converged_at = rounds.len() - 1;
    Ok(CascadeTrace {
        rounds,
        total_activated: total,
        converged_at,
    })
}

/// Check whether a seed activates the entire network.
pub fn verify_seed(
    g: &DirectedGraph,
    k: &ThresholdAssignment,
    seed: &[NodeId],
) -> Result<Verification> {
    let trace = gamma(g, k, seed)?;
    Ok(Verification {
        complete: trace.total_activated() == g.n(),
        activated: trace.total_activated(),
        rounds: trace.converged_at(),
    })
}

/// Guard for [`brute_force_min_seed`]; subsets of more than this many nodes
/// are not enumerable at desk scale.
pub const BRUTE_FORCE_NODE_LIMIT: usize = 20;

/// Exhaustively find a minimum complete seed set, enumerating subsets in
/// increasing cardinality (lexicographic within a cardinality).
///
/// Deliberately runs on the literal one-step rule rather than the
/// incremental engine, so it stays an independent oracle.
pub fn brute_force_min_seed(
    g: &DirectedGraph,
    k: &ThresholdAssignment,
    size_limit: usize,
) -> Result<SeedSet> {
    let n = g.n();
    if n > BRUTE_FORCE_NODE_LIMIT {
        return Err(Error::EnumerationGuard {
            n,
            limit: BRUTE_FORCE_NODE_LIMIT,
        });
    }
    let limit = size_limit.min(n);
    for size in 0..=limit {
        let mut found: Option<Vec<NodeId>> = None;
        for_each_subset(n, size, &mut |subset| {
            if found.is_some() {
                return;
            }
            if naive_is_complete(g, k, subset) {
                found = Some(subset.to_vec());
            }
        });
        if let Some(members) = found {
            return Ok(SeedSet::new(members, n));
        }
    }
    Err(Error::NoSeedWithinLimit(size_limit))
}

fn naive_is_complete(g: &DirectedGraph, k: &ThresholdAssignment, seed: &[NodeId]) -> bool {
    let mut current: BTreeSet<NodeId> = seed.iter().copied().collect();
    loop {
        let next = activate_once(g, k, &current).expect("ids validated by caller");
        if next.len() == g.n() {
            return true;
        }
        if next.len() == current.len() {
            return false;
        }
        current = next;
    }
}

/// Visit all size-`size` subsets of `0..n` in lexicographic order.
fn for_each_subset(n: usize, size: usize, visit: &mut impl FnMut(&[NodeId])) {
    let mut subset: Vec<NodeId> = Vec::with_capacity(size);
    fn recurse(
        n: usize,
        size: usize,
        start: usize,
        subset: &mut Vec<NodeId>,
        visit: &mut impl FnMut(&[NodeId]),
    ) {
        if subset.len() == size {
            visit(subset);
            return;
        }
        let remaining = size - subset.len();
        for v in start..=(n - remaining) {
            subset.push(v as NodeId);
            recurse(n, size, v + 1, subset, visit);
            subset.pop();
        }
    }
    if size == 0 {
        visit(&subset);
    } else if size <= n {
        recurse(n, size, 0, &mut subset, visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};
    use crate::thresholds::{resolve, ThresholdSpec};

    fn ints(g: &DirectedGraph, k: u32) -> ThresholdAssignment {
        resolve(g, &ThresholdSpec::integer_cap(k).unwrap()).unwrap()
    }

    fn set(ids: &[NodeId]) -> BTreeSet<NodeId> {
        ids.iter().copied().collect()
    }

    #[test]
    fn one_step_on_k4_majority() {
        let g = complete(4);
        let k = ints(&g, 2);
        let next = activate_once(&g, &k, &set(&[0, 1])).unwrap();
        assert_eq!(next, set(&[0, 1, 2, 3]));
    }

    #[test]
    fn full_set_is_a_fixed_point() {
        let g = cycle(5);
        let k = ints(&g, 1);
        let all = set(&[0, 1, 2, 3, 4]);
        assert_eq!(activate_once(&g, &k, &all).unwrap(), all);
    }

    #[test]
    fn one_step_on_c4_single_threshold() {
        let g = cycle(4);
        let k = ints(&g, 1);
        let next = activate_once(&g, &k, &set(&[3])).unwrap();
        assert_eq!(next, set(&[0, 2, 3]));
    }

    #[test]
    fn gamma_traces_c4_from_single_seed() {
        let g = cycle(4);
        let k = ints(&g, 1);
        let trace = gamma(&g, &k, &[3]).unwrap();
        assert_eq!(trace.total_activated(), 4);
        assert_eq!(trace.converged_at(), 2);
        assert_eq!(trace.rounds(), &[vec![3], vec![0, 2], vec![1]]);
    }

    #[test]
    fn empty_seed_stays_empty_when_thresholds_positive() {
        let g = cycle(4);
        let k = ints(&g, 1);
        let trace = gamma(&g, &k, &[]).unwrap();
        assert_eq!(trace.total_activated(), 0);
        assert_eq!(trace.converged_at(), 0);
    }

    #[test]
    fn k4_majority_needs_two_seeds() {
        let g = complete(4);
        let k = ints(&g, 2);
        let trace = gamma(&g, &k, &[0]).unwrap();
        assert_eq!(trace.total_activated(), 1);
    }

    #[test]
    fn verify_c4_opposite_corners_complete_in_one_round() {
        let g = cycle(4);
        let k = ints(&g, 2);
        let v = verify_seed(&g, &k, &[1, 3]).unwrap();
        assert_eq!(
            v,
            Verification {
                complete: true,
                activated: 4,
                rounds: 1
            }
        );
    }

    #[test]
    fn verify_c4_adjacent_seeds_stall() {
        let g = cycle(4);
        let k = ints(&g, 2);
        let v = verify_seed(&g, &k, &[0, 1]).unwrap();
        assert!(!v.complete);
        assert_eq!(v.activated, 2);
    }

    #[test]
    fn zero_threshold_nodes_self_activate() {
        // path 0-1-2 with explicit k = 0 everywhere
        let g = crate::graph::path(3);
        let table = (0..3).map(|v| (v as NodeId, 0)).collect();
        let k = resolve(&g, &ThresholdSpec::per_node(table)).unwrap();
        let trace = gamma(&g, &k, &[]).unwrap();
        assert_eq!(trace.total_activated(), 3);
        assert_eq!(trace.converged_at(), 1);
    }

    #[test]
    fn out_of_range_seed_rejected() {
        let g = cycle(4);
        let k = ints(&g, 1);
        assert!(matches!(
            gamma(&g, &k, &[9]),
            Err(Error::NodeOutOfRange { id: 9, .. })
        ));
        assert!(activate_once(&g, &k, &set(&[9])).is_err());
    }

    #[test]
    fn duplicate_seed_ids_collapse() {
        let g = cycle(4);
        let k = ints(&g, 1);
        let trace = gamma(&g, &k, &[3, 3, 3]).unwrap();
        assert_eq!(trace.rounds()[0], vec![3]);
        assert_eq!(trace.total_activated(), 4);
    }

    #[test]
    fn brute_force_finds_exact_minima() {
        let g = complete(4);
        let k = ints(&g, 2);
        assert_eq!(brute_force_min_seed(&g, &k, 4).unwrap().size(), 2);

        let g = cycle(4);
        let k = ints(&g, 1);
        assert_eq!(brute_force_min_seed(&g, &k, 4).unwrap().size(), 1);
    }

    #[test]
    fn brute_force_zero_thresholds_need_no_seed() {
        let g = cycle(4);
        let table = (0..4).map(|v| (v as NodeId, 0)).collect();
        let k = resolve(&g, &ThresholdSpec::per_node(table)).unwrap();
        assert_eq!(brute_force_min_seed(&g, &k, 4).unwrap().size(), 0);
    }

    #[test]
    fn brute_force_guards_large_graphs() {
        let g =
            crate::graph::generate(crate::graph::Model::ErdosRenyi { n: 30, p: 0.1 }, 1).unwrap();
        let k = ints(&g, 1);
        assert!(matches!(
            brute_force_min_seed(&g, &k, 30),
            Err(Error::EnumerationGuard { n: 30, .. })
        ));
    }

    #[test]
    fn subset_enumeration_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, &mut |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
