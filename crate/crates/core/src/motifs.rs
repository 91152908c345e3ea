//! Tree-shape coefficients locating a tree between the star and path
//! motifs, and per-node degree/eccentricity reports.

use thiserror::Error;

use crate::cluster::{bfs_hops, SpanningTree};
use crate::graph::NodeLabel;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MotifError {
    #[error("tree metrics need at least 2 nodes, got {0}")]
    TooSmall(usize),
}

/// Hop-count diameter and leaf count of a tree with derived ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeMetrics {
    pub n: usize,
    pub diameter: usize,
    pub leaves: usize,
    /// `d / (n - 1)`: `2/(n-1)` for a star, `1` for a path.
    pub star_path: f64,
    /// `|d - l| / n`
    pub motif_gap: f64,
}

pub fn star_path(n: usize, diameter: usize) -> f64 {
    diameter as f64 / (n - 1) as f64
}

pub fn motif_gap(n: usize, diameter: usize, leaves: usize) -> f64 {
    diameter.abs_diff(leaves) as f64 / n as f64
}

fn farthest(dist: &[usize]) -> (usize, usize) {
    // first index among the farthest nodes
    dist.iter().enumerate().fold(
        (0, 0),
        |best, (i, &d)| if d > best.1 { (i, d) } else { best },
    )
}

/// Diameter by double sweep: the farthest node from any start is one end of
/// a longest path.
pub fn tree_metrics<N: NodeLabel>(t: &SpanningTree<N>) -> Result<TreeMetrics, MotifError> {
    let n = t.len();
    if n < 2 {
        return Err(MotifError::TooSmall(n));
    }
    let adj = t.adjacency();
    let (end, _) = farthest(&bfs_hops(&adj, 0));
    let (_, diameter) = farthest(&bfs_hops(&adj, end));
    let leaves = adj.iter().filter(|nbrs| nbrs.len() == 1).count();
    Ok(TreeMetrics {
        n,
        diameter,
        leaves,
        star_path: star_path(n, diameter),
        motif_gap: motif_gap(n, diameter, leaves),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStats<N> {
    pub node: N,
    pub degree: usize,
    pub eccentricity: usize,
    pub is_leaf: bool,
    pub is_center: bool,
}

/// Per-node stats in node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeReport<N> {
    pub nodes: Vec<NodeStats<N>>,
}

impl<N: NodeLabel> NodeReport<N> {
    pub fn get(&self, node: N) -> Option<&NodeStats<N>> {
        self.nodes.iter().find(|s| s.node == node)
    }

    pub fn centers(&self) -> Vec<N> {
        self.nodes
            .iter()
            .filter(|s| s.is_center)
            .map(|s| s.node)
            .collect()
    }
}

pub fn node_report<N: NodeLabel>(t: &SpanningTree<N>) -> NodeReport<N> {
    let adj = t.adjacency();
    let ecc: Vec<usize> = (0..adj.len())
        .map(|i| bfs_hops(&adj, i).into_iter().max().unwrap_or(0))
        .collect();
    let radius = ecc.iter().copied().min().unwrap_or(0);
    let nodes = t
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &node)| NodeStats {
            node,
            degree: adj[i].len(),
            eccentricity: ecc[i],
            is_leaf: adj[i].len() == 1,
            is_center: ecc[i] == radius,
        })
        .collect();
    NodeReport { nodes }
}
