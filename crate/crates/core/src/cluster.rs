//! Single-link agglomerative clustering, the spanning tree it realizes, a
//! Kruskal cross-check and dendrogram cuts for node coloring.
//!
//! Ties are ubiquitous because distances are reciprocals of small integers.
//! Every candidate pair is ranked by `(distance, lower label, higher label)`,
//! both here and in [`kruskal_oracle`], so the two routes pick identical
//! edges.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph::{DistanceMatrix, NodeLabel};

/// Default dendrogram cut multiplier.
pub const DEFAULT_COLOR_MULTIPLIER: f64 = 1.2;

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("disconnected input: no finite distance joins {left} and {right}")]
    Disconnected { left: String, right: String },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("color multiplier must be positive and finite, got {0}")]
    InvalidMultiplier(f64),
}

/// One agglomeration step.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeEvent<N> {
    /// `1..=N-1`
    pub step: usize,
    /// Cluster holding `edge.0`. Singletons are numbered `0..N` by node
    /// order; the cluster formed at step `s` is numbered `N + s - 1`.
    pub cluster_a: usize,
    /// Cluster holding `edge.1`.
    pub cluster_b: usize,
    pub distance: f64,
    /// Node pair realizing the minimum inter-cluster distance.
    pub edge: (N, N),
    /// Members of the merged cluster, sorted.
    pub members: Vec<N>,
}

/// The dendrogram: `N-1` merges in order, plus `thr`, the last (largest)
/// merge distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeSequence<N> {
    pub nodes: Vec<N>,
    pub events: Vec<MergeEvent<N>>,
    pub thr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Link {
    distance: f64,
    lo: usize,
    hi: usize,
}

impl Link {
    fn new(distance: f64, i: usize, j: usize) -> Self {
        Link {
            distance,
            lo: i.min(j),
            hi: i.max(j),
        }
    }

    fn rank(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.lo.cmp(&other.lo))
            .then(self.hi.cmp(&other.hi))
    }

    fn min(self, other: Self) -> Self {
        if other.rank(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

struct Cluster {
    id: usize,
    members: Vec<usize>,
}

/// Nearest-neighbor clustering over a cluster-to-cluster link matrix.
///
/// After each merge the link to any other cluster is the smaller of the two
/// merged links, carrying along the node pair that realizes it.
pub fn single_link_cluster<N: NodeLabel>(
    d: &DistanceMatrix<N>,
) -> Result<MergeSequence<N>, ClusterError> {
    let n = d.len();
    let nodes = d.nodes().to_vec();
    let mut links: Vec<Vec<Link>> = (0..n)
        .map(|i| (0..n).map(|j| Link::new(d.get(i, j), i, j)).collect())
        .collect();
    let mut active: Vec<Option<Cluster>> = (0..n)
        .map(|i| {
            Some(Cluster {
                id: i,
                members: vec![i],
            })
        })
        .collect();

    let mut events = Vec::with_capacity(n.saturating_sub(1));
    for step in 1..n {
        let mut best: Option<(usize, usize, Link)> = None;
        for a in 0..n {
            if active[a].is_none() {
                continue;
            }
            for b in a + 1..n {
                if active[b].is_none() {
                    continue;
                }
                let link = links[a][b];
                if best.is_none_or(|(_, _, cur)| link.rank(&cur) == Ordering::Less) {
                    best = Some((a, b, link));
                }
            }
        }
        let (a, b, link) = best.expect("at least two active clusters");
        let name = |slot: usize| {
            let members: Vec<String> = active[slot]
                .as_ref()
                .map(|c| c.members.iter().map(|&i| nodes[i].to_string()).collect())
                .unwrap_or_default();
            format!("{{{}}}", members.join(", "))
        };
        if !link.distance.is_finite() {
            return Err(ClusterError::Disconnected {
                left: name(a),
                right: name(b),
            });
        }

        let ca = active[a].take().expect("active");
        let cb = active[b].take().expect("active");
        let (first, second) = if ca.members.contains(&link.lo) {
            (ca, cb)
        } else {
            (cb, ca)
        };
        let mut members: Vec<usize> = first
            .members
            .iter()
            .chain(&second.members)
            .copied()
            .collect();
        members.sort_unstable();
        events.push(MergeEvent {
            step,
            cluster_a: first.id,
            cluster_b: second.id,
            distance: link.distance,
            edge: (nodes[link.lo], nodes[link.hi]),
            members: members.iter().map(|&i| nodes[i]).collect(),
        });

        for k in 0..n {
            if active[k].is_some() {
                let merged = links[a][k].min(links[b][k]);
                links[a][k] = merged;
                links[k][a] = merged;
            }
        }
        active[a] = Some(Cluster {
            id: n + step - 1,
            members,
        });
    }

    let thr = events.last().map_or(0.0, |e| e.distance);
    Ok(MergeSequence { nodes, events, thr })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge<N> {
    pub a: N,
    pub b: N,
    pub distance: f64,
}

/// A tree over labeled nodes. Construction checks `N-1` edges, no
/// self-loops, no cycles and full coverage of the node set.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree<N> {
    nodes: Vec<N>,
    edges: Vec<TreeEdge<N>>,
}

impl<N: NodeLabel> SpanningTree<N> {
    pub fn new(
        nodes: impl IntoIterator<Item = N>,
        edges: Vec<TreeEdge<N>>,
    ) -> Result<Self, ClusterError> {
        let nodes: Vec<N> = nodes
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = nodes.len();
        if n == 0 && edges.is_empty() {
            return Ok(SpanningTree { nodes, edges });
        }
        if edges.len() + 1 != n {
            return Err(ClusterError::InvalidTree(format!(
                "{} edges for {} nodes",
                edges.len(),
                n
            )));
        }
        let mut uf = UnionFind::<usize>::new(n);
        for e in &edges {
            let (Ok(i), Ok(j)) = (nodes.binary_search(&e.a), nodes.binary_search(&e.b)) else {
                return Err(ClusterError::InvalidTree(format!(
                    "edge ({}, {}) references an unknown node",
                    e.a, e.b
                )));
            };
            if !uf.union(i, j) {
                return Err(ClusterError::InvalidTree(format!(
                    "edge ({}, {}) closes a cycle",
                    e.a, e.b
                )));
            }
        }
        Ok(SpanningTree { nodes, edges })
    }

    /// Unit-distance tree, handy for shape-only computations.
    pub fn from_pairs(
        nodes: impl IntoIterator<Item = N>,
        pairs: &[(N, N)],
    ) -> Result<Self, ClusterError> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| TreeEdge {
                a,
                b,
                distance: 1.0,
            })
            .collect();
        Self::new(nodes, edges)
    }

    pub fn nodes(&self) -> &[N] {
        &self.nodes
    }

    pub fn edges(&self) -> &[TreeEdge<N>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of edge distances, added in ascending order so that trees with
    /// equal distance multisets give bit-identical totals.
    pub fn total_distance(&self) -> f64 {
        let mut ds: Vec<f64> = self.edges.iter().map(|e| e.distance).collect();
        ds.sort_by(f64::total_cmp);
        ds.into_iter().sum()
    }

    /// Edges as sorted `(lo, hi)` pairs.
    pub fn edge_set(&self) -> BTreeSet<(N, N)> {
        self.edges
            .iter()
            .map(|e| if e.a <= e.b { (e.a, e.b) } else { (e.b, e.a) })
            .collect()
    }

    /// Neighbor lists by node index.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            let i = self.nodes.binary_search(&e.a).expect("validated");
            let j = self.nodes.binary_search(&e.b).expect("validated");
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }
}

/// The tree formed by the realized edges of the merges.
pub fn mst_from_merges<N: NodeLabel>(seq: &MergeSequence<N>) -> SpanningTree<N> {
    let edges = seq
        .events
        .iter()
        .map(|e| TreeEdge {
            a: e.edge.0,
            b: e.edge.1,
            distance: e.distance,
        })
        .collect();
    SpanningTree::new(seq.nodes.iter().copied(), edges)
        .expect("merge events of a connected input form a spanning tree")
}

/// Greedy Kruskal over all finite pairs, with the same tie order as
/// [`single_link_cluster`].
pub fn kruskal_oracle<N: NodeLabel>(
    d: &DistanceMatrix<N>,
) -> Result<SpanningTree<N>, ClusterError> {
    let n = d.len();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dist = d.get(i, j);
            if dist.is_finite() {
                candidates.push((dist, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut uf = UnionFind::<usize>::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (dist, i, j) in candidates {
        if uf.union(i, j) {
            edges.push(TreeEdge {
                a: d.nodes()[i],
                b: d.nodes()[j],
                distance: dist,
            });
        }
    }
    if n > 0 && edges.len() + 1 != n {
        let root = uf.find(0);
        let (left, right): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| uf.find(i) == root);
        let rest_root = uf.find(right[0]);
        let show = |idx: &mut dyn Iterator<Item = usize>| {
            let v: Vec<String> = idx.map(|i| d.nodes()[i].to_string()).collect();
            format!("{{{}}}", v.join(", "))
        };
        return Err(ClusterError::Disconnected {
            left: show(&mut left.into_iter()),
            right: show(&mut right.into_iter().filter(|&i| uf.find(i) == rest_root)),
        });
    }
    SpanningTree::new(d.nodes().iter().copied(), edges)
}

/// Cluster labels from cutting the dendrogram at `multiplier * thr`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorAssignment<N> {
    pub multiplier: f64,
    pub cut: f64,
    pub colors: BTreeMap<N, usize>,
}

impl<N: NodeLabel> ColorAssignment<N> {
    pub fn color_of(&self, n: N) -> Option<usize> {
        self.colors.get(&n).copied()
    }

    pub fn cluster_count(&self) -> usize {
        self.colors.values().collect::<BTreeSet<_>>().len()
    }

    /// Members per color index.
    pub fn groups(&self) -> BTreeMap<usize, Vec<N>> {
        let mut out: BTreeMap<usize, Vec<N>> = BTreeMap::new();
        for (&n, &c) in &self.colors {
            out.entry(c).or_default().push(n);
        }
        out
    }
}

/// Nodes share a color iff the dendrogram joins them at a linkage strictly
/// below `multiplier * thr`. Colors are numbered by smallest member.
pub fn assign_colors<N: NodeLabel>(
    seq: &MergeSequence<N>,
    multiplier: f64,
) -> Result<ColorAssignment<N>, ClusterError> {
    if !(multiplier.is_finite() && multiplier > 0.0) {
        return Err(ClusterError::InvalidMultiplier(multiplier));
    }
    let cut = multiplier * seq.thr;
    let n = seq.nodes.len();
    let mut uf = UnionFind::<usize>::new(n);
    let index = |x: N| {
        seq.nodes
            .binary_search(&x)
            .expect("event node belongs to the sequence")
    };
    for e in seq.events.iter().filter(|e| e.distance < cut) {
        uf.union(index(e.edge.0), index(e.edge.1));
    }
    let mut color_of_root = BTreeMap::new();
    let mut colors = BTreeMap::new();
    for (i, &node) in seq.nodes.iter().enumerate() {
        let next = color_of_root.len();
        let c = *color_of_root.entry(uf.find(i)).or_insert(next);
        colors.insert(node, c);
    }
    Ok(ColorAssignment {
        multiplier,
        cut,
        colors,
    })
}

/// Hop distances from `start` in a tree given as adjacency lists.
pub(crate) fn bfs_hops(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}
