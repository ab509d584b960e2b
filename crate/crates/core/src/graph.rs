//! Directed-graph representation, edge-list ingestion, symmetrization, and
//! synthetic-graph generation.
//!
//! Adjacency is stored in compressed sparse row form: one contiguous target
//! array per direction plus per-node offsets. Graphs are immutable after
//! construction and safe to share across threads.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::{Error, Result};

/// Dense node identifier in `[0, n)`.
pub type NodeId = u32;

#[derive(Debug, Clone)]
struct Labels {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

/// An immutable directed graph with both out- and in-adjacency.
///
/// Invariants established at construction:
/// - no self-loops, no duplicate edges;
/// - per-node neighbor lists sorted ascending;
/// - node ids dense in `[0, n)`.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    n: usize,
    m: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    labels: Option<Labels>,
    symmetric: bool,
}

/// Options for [`load_edge_list`].
#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Add the reverse of every edge after ingestion.
    pub symmetrize: bool,
    /// Map arbitrary string tokens to dense ids in first-seen order.
    /// When false, tokens must parse as integers and are trusted as ids.
    pub relabel: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            symmetrize: false,
            relabel: true,
        }
    }
}

/// Summary statistics for a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub min_in_degree: usize,
    pub max_in_degree: usize,
    pub mean_in_degree: f64,
    /// Nodes with in-degree zero.
    pub isolated: usize,
    /// True iff for every edge (u,v) the edge (v,u) exists.
    pub is_symmetric: bool,
}

/// Synthetic graph models. Both produce symmetric graphs.
#[derive(Debug, Clone, Copy)]
pub enum Model {
    /// G(n, p): each unordered pair is an edge independently with probability p.
    ErdosRenyi { n: usize, p: f64 },
    /// Preferential attachment: each new node links to `attach` distinct
    /// existing nodes chosen proportionally to degree.
    BarabasiAlbert { n: usize, attach: usize },
}

impl DirectedGraph {
    /// Build a graph from directed edge pairs. Self-loops are dropped and
    /// duplicate edges collapsed; endpoints must be `< n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                let id = u.max(v) as u64;
                return Err(Error::NodeOutOfRange { id, n });
            }
            if u != v {
                pairs.push((u, v));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_unique(n, pairs, None))
    }

    fn from_sorted_unique(n: usize, pairs: Vec<(NodeId, NodeId)>, labels: Option<Labels>) -> Self {
        let m = pairs.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(u, v) in &pairs {
            out_offsets[u as usize + 1] += 1;
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut out_targets = vec![0 as NodeId; m];
        let mut in_sources = vec![0 as NodeId; m];
        let mut out_cursor = out_offsets.clone();
        let mut in_cursor = in_offsets.clone();
        // pairs are sorted by (u, v), so both per-node lists come out sorted.
        for &(u, v) in &pairs {
            out_targets[out_cursor[u as usize]] = v;
            out_cursor[u as usize] += 1;
            in_sources[in_cursor[v as usize]] = u;
            in_cursor[v as usize] += 1;
        }
        let symmetric = out_offsets == in_offsets && out_targets == in_sources;
        DirectedGraph {
            n,
            m,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
            labels,
            symmetric,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Directed edge count.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_offsets[v as usize + 1] - self.out_offsets[v as usize]
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_offsets[v as usize + 1] - self.in_offsets[v as usize]
    }

    /// Out-neighbors of `v`, sorted ascending.
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_offsets[v as usize]..self.out_offsets[v as usize + 1]]
    }

    /// In-neighbors of `v`, sorted ascending.
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.in_sources[self.in_offsets[v as usize]..self.in_offsets[v as usize + 1]]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Original label of `v` when the input was relabeled.
    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels.as_ref().map(|l| l.names[v as usize].as_str())
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Resolve a seed-file token to a node id: by label table when the graph
    /// was relabeled, otherwise as a raw integer id.
    pub fn resolve_node(&self, token: &str) -> Option<NodeId> {
        match &self.labels {
            Some(l) => l.index.get(token).copied(),
            None => token
                .parse::<NodeId>()
                .ok()
                .filter(|&id| (id as usize) < self.n),
        }
    }

    /// Printable name of `v`: its original label if any, else the dense id.
    pub fn node_name(&self, v: NodeId) -> String {
        match self.label(v) {
            Some(s) => s.to_string(),
            None => v.to_string(),
        }
    }

    /// Return the graph with the reverse of every edge added. Idempotent.
    pub fn symmetrize(&self) -> DirectedGraph {
        if self.symmetric {
            return self.clone();
        }
        let mut pairs = Vec::with_capacity(2 * self.m);
        for u in 0..self.n as NodeId {
            for &v in self.out_neighbors(u) {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted_unique(self.n, pairs, self.labels.clone())
    }

    pub fn stats(&self) -> GraphStats {
        let mut min_in = usize::MAX;
        let mut max_in = 0usize;
        let mut isolated = 0usize;
        for v in 0..self.n as NodeId {
            let d = self.in_degree(v);
            min_in = min_in.min(d);
            max_in = max_in.max(d);
            if d == 0 {
                isolated += 1;
            }
        }
        if self.n == 0 {
            min_in = 0;
        }
        GraphStats {
            n: self.n,
            m: self.m,
            min_in_degree: min_in,
            max_in_degree: max_in,
            mean_in_degree: if self.n == 0 {
                0.0
            } else {
                self.m as f64 / self.n as f64
            },
            isolated,
            is_symmetric: self.symmetric,
        }
    }

    /// Write the edge list, one `u v` per line sorted by `(u, v)`, with an
    /// optional `# n=<n> m=<m>` header comment.
    pub fn write_edge_list<W: Write>(&self, mut w: W, header: bool) -> Result<()> {
        if header {
            writeln!(w, "# n={} m={}", self.n, self.m)?;
        }
        for u in 0..self.n as NodeId {
            for &v in self.out_neighbors(u) {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }
}

/// Parse a whitespace-separated `u v` edge list. Lines starting with `#` are
/// comments; blank lines are skipped. Duplicate edges collapse and self-loops
/// are dropped, though their endpoints still register as nodes.
pub fn load_edge_list<R: BufRead>(reader: R, options: &LoadOptions) -> Result<DirectedGraph> {
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    let mut labels = Labels {
        names: Vec::new(),
        index: HashMap::new(),
    };
    let mut max_id: Option<NodeId> = None;

    let mut intern = |token: &str| -> NodeId {
        match labels.index.get(token) {
            Some(&id) => id,
            None => {
                let id = labels.names.len() as NodeId;
                labels.names.push(token.to_string());
                labels.index.insert(token.to_string(), id);
                id
            }
        }
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two tokens, got {trimmed:?}"),
                })
            }
        };
        let (u, v) = if options.relabel {
            (intern(a), intern(b))
        } else {
            let parse = |t: &str| {
                t.parse::<NodeId>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid node id {t:?}"),
                })
            };
            let (u, v) = (parse(a)?, parse(b)?);
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            (u, v)
        };
        if u != v {
            pairs.push((u, v));
        }
    }

    let n = if options.relabel {
        labels.names.len()
    } else {
        max_id.map_or(0, |m| m as usize + 1)
    };
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if options.symmetrize {
        let mut rev: Vec<(NodeId, NodeId)> = pairs.iter().map(|&(u, v)| (v, u)).collect();
        pairs.append(&mut rev);
    }
    pairs.sort_unstable();
    pairs.dedup();
    Ok(DirectedGraph::from_sorted_unique(
        n,
        pairs,
        options.relabel.then_some(labels),
    ))
}

/// Generate a synthetic symmetric graph. Deterministic for a fixed seed.
pub fn generate(model: Model, rng_seed: u64) -> Result<DirectedGraph> {
    match model {
        Model::ErdosRenyi { n, p } => {
            if n == 0 {
                return Err(Error::InvalidParameter("er: n must be >= 1".into()));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "er: p must lie in [0,1], got {p}"
                )));
            }
            let mut rng = Pcg64::seed_from_u64(rng_seed);
            let undirected = er_pairs(n, p, &mut rng);
            build_symmetric(n, undirected)
        }
        Model::BarabasiAlbert { n, attach } => {
            if n == 0 {
                return Err(Error::InvalidParameter("ba: n must be >= 1".into()));
            }
            if attach == 0 {
                return Err(Error::InvalidParameter("ba: attach must be >= 1".into()));
            }
            let mut rng = Pcg64::seed_from_u64(rng_seed);
            let undirected = ba_pairs(n, attach, &mut rng);
            build_symmetric(n, undirected)
        }
    }
}

fn build_symmetric(n: usize, undirected: Vec<(NodeId, NodeId)>) -> Result<DirectedGraph> {
    let mut pairs = Vec::with_capacity(2 * undirected.len());
    for (u, v) in undirected {
        pairs.push((u, v));
        pairs.push((v, u));
    }
    DirectedGraph::from_edges(n, pairs)
}

/// Sample the edges of G(n, p) over unordered pairs using geometric skips, so
/// sparse graphs cost O(m) rather than O(n^2).
fn er_pairs(n: usize, p: f64, rng: &mut Pcg64) -> Vec<(NodeId, NodeId)> {
    let mut pairs = Vec::new();
    if p <= 0.0 || n < 2 {
        return pairs;
    }
    let total: u64 = (n as u64) * (n as u64 - 1) / 2;
    if p >= 1.0 {
        for i in 0..n as NodeId {
            for j in (i + 1)..n as NodeId {
                pairs.push((i, j));
            }
        }
        return pairs;
    }
    let log_q = (1.0 - p).ln();
    // offset(i) = number of pairs whose smaller endpoint is < i
    let offset = |i: u64| i * (n as u64) - i * (i + 1) / 2;
    let mut pos: u64 = 0;
    let mut row: u64 = 0;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
        let gap = (u.ln() / log_q).floor();
        pos = match pos.checked_add(gap as u64) {
            Some(p) => p,
            None => break,
        };
        if pos >= total {
            break;
        }
        while offset(row + 1) <= pos {
            row += 1;
        }
        let col = row + 1 + (pos - offset(row));
        pairs.push((row as NodeId, col as NodeId));
        pos += 1;
    }
    pairs
}

/// Symmetric cycle C_n: edges i <-> (i+1) mod n.
pub fn cycle(n: usize) -> DirectedGraph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    let pairs = (0..n as NodeId).map(|i| (i, ((i as usize + 1) % n) as NodeId));
    build_symmetric(n, pairs.collect()).expect("valid cycle")
}

/// Complete symmetric graph K_n.
pub fn complete(n: usize) -> DirectedGraph {
    let mut pairs = Vec::new();
    for i in 0..n as NodeId {
        for j in (i + 1)..n as NodeId {
            pairs.push((i, j));
        }
    }
    build_symmetric(n, pairs).expect("valid complete graph")
}

/// Symmetric path 0 <-> 1 <-> ... <-> n-1.
pub fn path(n: usize) -> DirectedGraph {
    let pairs = (0..n.saturating_sub(1))
        .map(|i| (i as NodeId, (i + 1) as NodeId))
        .collect();
    build_symmetric(n.max(1), pairs).expect("valid path")
}

/// Symmetric star: node 0 linked to `leaves` leaf nodes.
pub fn star(leaves: usize) -> DirectedGraph {
    let pairs = (1..=leaves).map(|i| (0 as NodeId, i as NodeId)).collect();
    build_symmetric(leaves + 1, pairs).expect("valid star")
}

/// Barabási–Albert preferential attachment. Starts from a clique on
/// `attach + 1` nodes; each later node attaches to `attach` distinct targets
/// sampled proportionally to current degree.
fn ba_pairs(n: usize, attach: usize, rng: &mut Pcg64) -> Vec<(NodeId, NodeId)> {
    let core = (attach + 1).min(n);
    let mut pairs = Vec::new();
    // endpoint multiset: sampling uniformly from it is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::new();
    for i in 0..core as NodeId {
        for j in (i + 1)..core as NodeId {
            pairs.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    for v in core..n {
        let want = attach.min(v);
        let mut chosen: Vec<NodeId> = Vec::with_capacity(want);
        while chosen.len() < want {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for t in chosen {
            pairs.push((v as NodeId, t));
            endpoints.push(v as NodeId);
            endpoints.push(t);
        }
    }
    pairs
}
