//! Shell decomposition for the tipping model.
//!
//! Every node starts with slack `dist_i = d_in_i - k_i`: the number of
//! in-neighbors it can lose while remaining activatable by the rest of the
//! graph. The decomposition repeatedly removes a node of minimal finite
//! slack; removing a node decrements each surviving out-neighbor's slack,
//! and a neighbor already at zero is marked infinite instead, meaning it can
//! no longer be activated by the survivors and must be a seed. The nodes
//! still present when every survivor is infinite form the seed set, and
//! seeding exactly those nodes activates the entire network: each removed
//! node had at least `k_i` in-neighbors among the nodes that outlived it,
//! so activation replays the removal sequence in reverse.
//!
//! The minimum is tracked with a lazy-deletion binary heap: every slack
//! change pushes a fresh entry and stale entries are discarded on pop,
//! keeping total work within O(m log n).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{DirectedGraph, NodeId};
use crate::thresholds::ThresholdAssignment;

const INF: u32 = u32::MAX;

/// Nodes that remain after decomposition; seeding them activates everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    members: Vec<NodeId>,
    n: usize,
}

impl SeedSet {
    /// Build from arbitrary members over a graph of `n` nodes; members are
    /// sorted and deduplicated.
    pub fn new(mut members: Vec<NodeId>, n: usize) -> Self {
        members.sort_unstable();
        members.dedup();
        SeedSet { members, n }
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Seed size as a fraction of the population.
    pub fn fraction(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.members.len() as f64 / self.n as f64
        }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Working state of a decomposition run.
#[derive(Debug)]
struct DecompState {
    /// Finite slack, or [`INF`] once the node can only be a seed.
    dist: Vec<u32>,
    removed: Vec<bool>,
    removal_order: Vec<NodeId>,
}

/// Result of [`tip_decomp`]: the seed set plus the removal sequence, which
/// is deterministic because ties on minimal slack break toward the smallest
/// node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompResult {
    pub seed: SeedSet,
    pub removal_order: Vec<NodeId>,
}

/// Decompose the graph under the given activation counts.
///
/// The assignment must have been resolved against `g` (so `k_i <= d_in_i`).
/// The graph itself is untouched; removal is tracked in private state, so
/// one graph can serve many runs.
pub fn tip_decomp(g: &DirectedGraph, k: &ThresholdAssignment) -> DecompResult {
    assert_eq!(
        k.len(),
        g.n(),
        "threshold assignment resolved against a different graph"
    );
    let n = g.n();
    let mut state = DecompState {
        dist: (0..n as NodeId)
            .map(|v| g.in_degree(v) as u32 - k.get(v))
            .collect(),
        removed: vec![false; n],
        removal_order: Vec::new(),
    };

    let mut heap: BinaryHeap<Reverse<(u32, NodeId)>> = BinaryHeap::with_capacity(n + g.m());
    for v in 0..n as NodeId {
        heap.push(Reverse((state.dist[v as usize], v)));
    }

    while let Some(Reverse((d, v))) = heap.pop() {
        if state.removed[v as usize] || state.dist[v as usize] != d {
            continue; // stale entry or already infinite
        }
        state.removed[v as usize] = true;
        state.removal_order.push(v);
        for &w in g.out_neighbors(v) {
            let wi = w as usize;
            if state.removed[wi] || state.dist[wi] == INF {
                continue; // infinity is absorbing
            }
            if state.dist[wi] > 0 {
                state.dist[wi] -= 1;
                heap.push(Reverse((state.dist[wi], w)));
            } else {
                state.dist[wi] = INF;
            }
        }
    }

    let members: Vec<NodeId> = (0..n as NodeId)
        .filter(|&v| !state.removed[v as usize])
        .collect();
    DecompResult {
        seed: SeedSet::new(members, n),
        removal_order: state.removal_order,
    }
}
