//! Newman-Girvan modularity and Louvain greedy maximization.
//!
//! Modularity compares intra-community edge density against the expectation
//! under a degree-preserving random rewiring. Louvain alternates two phases:
//! greedy single-node moves while any move improves modularity, then
//! aggregation of communities into a weighted supergraph (intra-community
//! weight becomes a self-loop), repeated until a full level yields no gain.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_pcg::Pcg64;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// Margin a move must clear to count as an improvement; guards against
/// float-noise oscillation on exact ties.
const GAIN_EPS: f64 = 1e-12;

/// Node-to-community assignment with dense community ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<u32>,
    community_count: usize,
}

impl Partition {
    /// Normalize arbitrary community labels to dense ids in first-seen order.
    pub fn from_assignment(raw: Vec<u32>) -> Partition {
        let mut remap: BTreeMap<u32, u32> = BTreeMap::new();
        let mut assignment = Vec::with_capacity(raw.len());
        for label in raw {
            let next = remap.len() as u32;
            let id = *remap.entry(label).or_insert(next);
            assignment.push(id);
        }
        Partition {
            assignment,
            community_count: remap.len(),
        }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition {
            assignment: (0..n as u32).collect(),
            community_count: n,
        }
    }

    pub fn all_in_one(n: usize) -> Partition {
        Partition {
            assignment: vec![0; n],
            community_count: if n == 0 { 0 } else { 1 },
        }
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn community_of(&self, v: NodeId) -> u32 {
        self.assignment[v as usize]
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Members per community, each sorted, ordered by smallest member.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut groups: Vec<Vec<NodeId>> = vec![Vec::new(); self.community_count];
        for (v, &c) in self.assignment.iter().enumerate() {
            groups[c as usize].push(v as NodeId);
        }
        groups.sort_by_key(|g| g.first().copied());
        groups
    }
}

/// Newman-Girvan modularity of a partition on a symmetric graph.
pub fn modularity(g: &DirectedGraph, p: &Partition) -> Result<f64> {
    if !g.is_symmetric() {
        return Err(Error::AsymmetricGraph);
    }
    if p.len() != g.n() {
        return Err(Error::PartitionSizeMismatch {
            partition: p.len(),
            graph: g.n(),
        });
    }
    if g.m() == 0 {
        return Err(Error::NoEdges);
    }
    let m = (g.m() / 2) as f64; // undirected edge count
    let mut intra = vec![0usize; p.community_count()];
    let mut degree_sum = vec![0f64; p.community_count()];
    for u in 0..g.n() as NodeId {
        let cu = p.community_of(u);
        degree_sum[cu as usize] += g.out_degree(u) as f64;
        for &v in g.out_neighbors(u) {
            if v > u && p.community_of(v) == cu {
                intra[cu as usize] += 1;
            }
        }
    }
    let mut q = 0.0;
    for c in 0..p.community_count() {
        q += intra[c] as f64 / m - (degree_sum[c] / (2.0 * m)).powi(2);
    }
    Ok(q)
}

/// Weighted graph used at each aggregation level. Off-diagonal weights are
/// stored on both endpoints; self-loop weight is kept separately and counts
/// twice toward the degree.
struct LevelGraph {
    adj: Vec<Vec<(u32, f64)>>,
    self_loop: Vec<f64>,
    degree: Vec<f64>,
    two_m: f64,
}

impl LevelGraph {
    fn from_graph(g: &DirectedGraph) -> LevelGraph {
        let n = g.n();
        let mut adj = Vec::with_capacity(n);
        let mut degree = Vec::with_capacity(n);
        for v in 0..n as NodeId {
            adj.push(g.out_neighbors(v).iter().map(|&u| (u, 1.0)).collect());
            degree.push(g.out_degree(v) as f64);
        }
        let two_m = degree.iter().sum();
        LevelGraph {
            adj,
            self_loop: vec![0.0; n],
            degree,
            two_m,
        }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    /// Modularity of an assignment over this level.
    fn quality(&self, comm: &[u32]) -> f64 {
        let count = comm.iter().copied().max().map_or(0, |c| c as usize + 1);
        let mut internal = vec![0.0f64; count]; // ordered-pair weight + 2*loops
        let mut total = vec![0.0f64; count];
        for v in 0..self.n() {
            let cv = comm[v] as usize;
            total[cv] += self.degree[v];
            internal[cv] += 2.0 * self.self_loop[v];
            for &(u, w) in &self.adj[v] {
                if comm[u as usize] as usize == cv {
                    internal[cv] += w;
                }
            }
        }
        (0..count)
            .map(|c| internal[c] / self.two_m - (total[c] / self.two_m).powi(2))
            .sum()
    }

    /// Collapse communities into supernodes. `comm` must use dense ids.
    fn aggregate(&self, comm: &[u32], count: usize) -> LevelGraph {
        let mut merged: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); count];
        let mut intra_ordered = vec![0.0f64; count];
        let mut self_loop = vec![0.0f64; count];
        for v in 0..self.n() {
            let cv = comm[v];
            self_loop[cv as usize] += self.self_loop[v];
            for &(u, w) in &self.adj[v] {
                let cu = comm[u as usize];
                if cu == cv {
                    intra_ordered[cv as usize] += w;
                } else {
                    *merged[cv as usize].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        let mut adj = Vec::with_capacity(count);
        let mut degree = Vec::with_capacity(count);
        for c in 0..count {
            self_loop[c] += intra_ordered[c] / 2.0;
            let list: Vec<(u32, f64)> = merged[c].iter().map(|(&u, &w)| (u, w)).collect();
            let deg: f64 = list.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_loop[c];
            adj.push(list);
            degree.push(deg);
        }
        LevelGraph {
            adj,
            self_loop,
            degree,
            two_m: self.two_m,
        }
    }
}

/// One phase of greedy single-node moves. Returns the final assignment (not
/// renumbered), whether anything moved, and modularity after each pass.
fn one_level(lg: &LevelGraph, rng: &mut Pcg64) -> (Vec<u32>, bool, Vec<f64>) {
    let n = lg.n();
    let mut comm: Vec<u32> = (0..n as u32).collect();
    let mut sigma_tot: Vec<f64> = lg.degree.clone();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut moved_any = false;
    let mut pass_qs = Vec::new();
    loop {
        let mut moved_this_pass = false;
        for &v in &order {
            let c_old = comm[v];
            // weight from v to each neighboring community
            let mut links: BTreeMap<u32, f64> = BTreeMap::new();
            for &(u, w) in &lg.adj[v] {
                if u as usize != v {
                    *links.entry(comm[u as usize]).or_insert(0.0) += w;
                }
            }
            sigma_tot[c_old as usize] -= lg.degree[v];
            let score = |c: u32, link: f64| link - sigma_tot[c as usize] * lg.degree[v] / lg.two_m;
            let mut best_c = c_old;
            let mut best_score = score(c_old, links.get(&c_old).copied().unwrap_or(0.0));
            for (&c, &link) in &links {
                if c == c_old {
                    continue;
                }
                let s = score(c, link);
                if s > best_score + GAIN_EPS {
                    best_c = c;
                    best_score = s;
                }
            }
            comm[v] = best_c;
            sigma_tot[best_c as usize] += lg.degree[v];
            if best_c != c_old {
                moved_this_pass = true;
                moved_any = true;
            }
        }
        pass_qs.push(lg.quality(&comm));
        if !moved_this_pass {
            break;
        }
    }
    (comm, moved_any, pass_qs)
}

/// Trace of a Louvain run, for inspecting convergence behavior.
#[cfg(test)]
pub(crate) struct LouvainTrace {
    pub partition: Partition,
    pub modularity: f64,
    /// Modularity after each phase-1 pass, per level.
    pub pass_qs_per_level: Vec<Vec<f64>>,
}

fn louvain_impl(g: &DirectedGraph, rng_seed: u64) -> Result<(Partition, f64, Vec<Vec<f64>>)> {
    if !g.is_symmetric() {
        return Err(Error::AsymmetricGraph);
    }
    if g.n() == 0 || g.m() == 0 {
        return Err(Error::NoEdges);
    }
    let mut rng = Pcg64::seed_from_u64(rng_seed);
    let mut level = LevelGraph::from_graph(g);
    let mut membership: Vec<u32> = (0..g.n() as u32).collect();
    let mut all_pass_qs = Vec::new();

    loop {
        let (comm, moved, pass_qs) = one_level(&level, &mut rng);
        all_pass_qs.push(pass_qs);
        if !moved {
            let q = level.quality(&(0..level.n() as u32).collect::<Vec<_>>());
            let partition = Partition::from_assignment(membership);
            return Ok((partition, q, all_pass_qs));
        }
        // dense-renumber communities in ascending label order
        let mut remap: BTreeMap<u32, u32> = BTreeMap::new();
        for &c in &comm {
            let next = remap.len() as u32;
            remap.entry(c).or_insert(next);
        }
        let dense: Vec<u32> = comm.iter().map(|c| remap[c]).collect();
        for slot in membership.iter_mut() {
            *slot = dense[*slot as usize];
        }
        level = level.aggregate(&dense, remap.len());
    }
}

/// Greedy modularity maximization. Deterministic for a fixed seed: the seed
/// drives only the node visit order.
pub fn louvain(g: &DirectedGraph, rng_seed: u64) -> Result<(Partition, f64)> {
    let (partition, q, _) = louvain_impl(g, rng_seed)?;
    Ok((partition, q))
}

#[cfg(test)]
pub(crate) fn louvain_trace(g: &DirectedGraph, rng_seed: u64) -> Result<LouvainTrace> {
    let (partition, modularity, pass_qs_per_level) = louvain_impl(g, rng_seed)?;
    Ok(LouvainTrace {
        partition,
        modularity,
        pass_qs_per_level,
    })
}
