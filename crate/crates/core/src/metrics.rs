//! Structural measures correlated with seed size: local clustering and the
//! upper bound on minimum seed size for homogeneous integer thresholds on
//! undirected networks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_pcg::Pcg64;

use crate::community;
use crate::decomp::SeedSet;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::thresholds::ThresholdSpec;

/// Undirected neighbor lists for a graph; borrows the adjacency when the
/// graph is already symmetric.
pub(crate) enum UndirectedView<'a> {
    Symmetric(&'a DirectedGraph),
    Merged(Vec<Vec<NodeId>>),
}

impl<'a> UndirectedView<'a> {
    pub(crate) fn of(g: &'a DirectedGraph) -> Self {
        if g.is_symmetric() {
            return UndirectedView::Symmetric(g);
        }
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); g.n()];
        for u in 0..g.n() as NodeId {
            for &v in g.out_neighbors(u) {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        UndirectedView::Merged(adj)
    }

    pub(crate) fn neighbors(&self, v: NodeId) -> &[NodeId] {
        match self {
            UndirectedView::Symmetric(g) => g.out_neighbors(v),
            UndirectedView::Merged(adj) => &adj[v as usize],
        }
    }

    pub(crate) fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    pub(crate) fn edge_count(&self, n: usize) -> usize {
        (0..n as NodeId).map(|v| self.degree(v)).sum::<usize>() / 2
    }
}

fn sorted_intersection_size(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn clustering_of(view: &UndirectedView, v: NodeId) -> f64 {
    let neighbors = view.neighbors(v);
    let d = neighbors.len();
    if d < 2 {
        return 0.0;
    }
    // each edge between neighbors is seen from both endpoints
    let mut twice_r = 0usize;
    for &a in neighbors {
        twice_r += sorted_intersection_size(neighbors, view.neighbors(a));
    }
    let r = twice_r / 2;
    2.0 * r as f64 / (d as f64 * (d - 1) as f64)
}

/// Fraction of `v`'s undirected neighbor pairs that are themselves adjacent.
/// Nodes of degree < 2 return 0 by convention.
pub fn clustering_coefficient(g: &DirectedGraph, v: NodeId) -> Result<f64> {
    if v as usize >= g.n() {
        return Err(Error::NodeOutOfRange {
            id: v as u64,
            n: g.n(),
        });
    }
    Ok(clustering_of(&UndirectedView::of(g), v))
}

/// Arithmetic mean of the clustering coefficient over all nodes.
pub fn average_clustering(g: &DirectedGraph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    let view = UndirectedView::of(g);
    let total: f64 = (0..g.n() as NodeId).map(|v| clustering_of(&view, v)).sum();
    total / g.n() as f64
}

/// Mean clustering over a random node sample, for graphs where the exact
/// O(sum of squared degrees) pass is too slow. Exact when `sample >= n`.
pub fn average_clustering_sampled(g: &DirectedGraph, sample: usize, rng_seed: u64) -> f64 {
    if g.n() == 0 || sample == 0 {
        return 0.0;
    }
    if sample >= g.n() {
        return average_clustering(g);
    }
    let view = UndirectedView::of(g);
    let mut nodes: Vec<NodeId> = (0..g.n() as NodeId).collect();
    let mut rng = Pcg64::seed_from_u64(rng_seed);
    nodes.shuffle(&mut rng);
    nodes.truncate(sample);
    let total: f64 = nodes.iter().map(|&v| clustering_of(&view, v)).sum();
    total / sample as f64
}

/// Upper bound on the minimum seed size for a symmetric graph under a
/// homogeneous integer threshold k: sum over nodes of min(1, k/(d+1)).
pub fn reichman_bound(g: &DirectedGraph, spec: &ThresholdSpec) -> Result<f64> {
    let k = match spec {
        ThresholdSpec::IntegerCap(k) => *k,
        ThresholdSpec::Fraction { .. } => {
            return Err(Error::UnsupportedThreshold(
                "bound applies to homogeneous integer thresholds only",
            ))
        }
        ThresholdSpec::PerNode(_) => {
            return Err(Error::UnsupportedThreshold(
                "bound applies to homogeneous integer thresholds only",
            ))
        }
    };
    if !g.is_symmetric() {
        return Err(Error::AsymmetricGraph);
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "integer threshold must be >= 1".into(),
        ));
    }
    let mut sum = 0.0;
    for v in 0..g.n() as NodeId {
        let d = g.in_degree(v) as f64;
        sum += (k as f64 / (d + 1.0)).min(1.0);
    }
    Ok(sum)
}

/// Seed size divided by an upper bound on the optimum.
pub fn bound_ratio(seed: &SeedSet, bound: f64) -> Result<f64> {
    if bound.is_nan() || bound <= 0.0 {
        return Err(Error::ZeroBound);
    }
    Ok(seed.size() as f64 / bound)
}

/// The paper's grouping of networks by mean seed fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// mean seed fraction below 2%
    A,
    /// between 2% and 10%
    B,
    /// above 10%
    C,
}

impl Category {
    pub fn from_mean_seed_fraction(fraction: f64) -> Category {
        if fraction < 0.02 {
            Category::A
        } else if fraction <= 0.10 {
            Category::B
        } else {
            Category::C
        }
    }
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Category::A => write!(f, "A"),
            Category::B => write!(f, "B"),
            Category::C => write!(f, "C"),
        }
    }
}

/// Network-wide measures used to explain seed-set size.
#[derive(Debug, Clone)]
pub struct NetworkReport {
    pub n: usize,
    pub m_undirected: usize,
    pub avg_clustering: f64,
    pub louvain_modularity: f64,
    /// Mean seed fraction over sweep trials, when one was run.
    pub mean_seed_fraction: Option<f64>,
    pub category: Option<Category>,
}

/// Compute the structural half of a report (clustering and modularity).
/// Requires a symmetric graph, like the partition quality it reports.
pub fn network_report(g: &DirectedGraph, rng_seed: u64) -> Result<NetworkReport> {
    let (_, modularity) = community::louvain(g, rng_seed)?;
    let view = UndirectedView::of(g);
    Ok(NetworkReport {
        n: g.n(),
        m_undirected: view.edge_count(g.n()),
        avg_clustering: average_clustering(g),
        louvain_modularity: modularity,
        mean_seed_fraction: None,
        category: None,
    })
}
