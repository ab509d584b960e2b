//! Deterministic tipping-model cascades on directed social networks, and a
//! shell-decomposition heuristic that finds a seed set guaranteed to
//! activate the entire network.
//!
//! A node with threshold `k_i` activates once at least `k_i` of its
//! in-neighbors are active; activation is irreversible. Finding a minimum
//! set of initially-active nodes that tips the whole network is
//! NP-complete, but iteratively pruning the node of least slack
//! `d_in - k` leaves a (not necessarily minimal) seed set whose activation
//! provably reaches everyone. The crate also carries the structural
//! measures used to study when networks resist tipping: local clustering,
//! Louvain modularity, and the degree-based upper bound on minimum seed
//! size for homogeneous integer thresholds.
//!
//! ```
//! use tipcascade::{cascade, decomp, graph, thresholds};
//!
//! let g = graph::cycle(4);
//! let k = thresholds::resolve(&g, &thresholds::ThresholdSpec::integer_cap(1).unwrap()).unwrap();
//! let result = decomp::tip_decomp(&g, &k);
//! let check = cascade::verify_seed(&g, &k, result.seed.members()).unwrap();
//! assert!(check.complete);
//! ```

pub mod cascade;
pub mod community;
pub mod decomp;
mod error;
pub mod graph;
pub mod metrics;
pub mod thresholds;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, NodeId};
