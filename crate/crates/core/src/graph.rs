//! Paper-subject bipartite networks, their subject co-occurrence projection,
//! connected components and reciprocal-weight distance matrices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::io::{Read, Write};

use serde::Serialize;
use thiserror::Error;

use crate::categories::CategorySubset;
use crate::corpus::{SubjectId, SubjectRegistry};

/// Anything usable as a graph node label.
pub trait NodeLabel: Copy + Ord + Hash + Debug + Display {}

impl<T: Copy + Ord + Hash + Debug + Display> NodeLabel for T {}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("edge ({0}, {1}) has zero weight")]
    ZeroWeight(String, String),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(String, String),
    #[error("graph is disconnected ({components} components); extract a component first")]
    Disconnected { components: usize },
    #[error("invalid distance {value} for pair ({a}, {b}); finite entries must be positive")]
    InvalidDistance { a: String, b: String, value: f64 },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Subjects on one side, papers on the other; an edge per (subject, paper)
/// incidence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BipartiteGraph {
    pub subjects: BTreeSet<SubjectId>,
    pub papers: Vec<String>,
    /// `(subject, index into papers)`
    pub edges: Vec<(SubjectId, usize)>,
}

/// Papers without extra subjects have no incidences and are left out.
pub fn induce_bipartite(subset: &CategorySubset<'_>) -> BipartiteGraph {
    let mut g = BipartiteGraph::default();
    for r in subset.records.iter().filter(|r| r.extra_count() > 0) {
        let p = g.papers.len();
        g.papers.push(r.id.clone());
        for s in r.extras() {
            g.subjects.insert(s);
            g.edges.push((s, p));
        }
    }
    g
}

/// Undirected graph with positive integer edge weights and no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph<N: NodeLabel = SubjectId> {
    nodes: BTreeSet<N>,
    weights: BTreeMap<(N, N), u32>,
}

impl<N: NodeLabel> Default for WeightedGraph<N> {
    fn default() -> Self {
        WeightedGraph {
            nodes: BTreeSet::new(),
            weights: BTreeMap::new(),
        }
    }
}

fn ordered<N: Ord>(a: N, b: N) -> (N, N) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl<N: NodeLabel> WeightedGraph<N> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(a, b, weight)` triples, rejecting self-loops,
    /// zero weights and repeated pairs.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (N, N, u32)>,
    {
        let mut g = Self::new();
        for (a, b, w) in edges {
            g.add_edge(a, b, w)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self, n: N) {
        self.nodes.insert(n);
    }

    pub fn add_edge(&mut self, a: N, b: N, weight: u32) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        if weight == 0 {
            return Err(GraphError::ZeroWeight(a.to_string(), b.to_string()));
        }
        let key = ordered(a, b);
        if self.weights.insert(key, weight).is_some() {
            return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
        }
        self.nodes.insert(a);
        self.nodes.insert(b);
        Ok(())
    }

    fn increment(&mut self, a: N, b: N) {
        debug_assert!(a != b);
        *self.weights.entry(ordered(a, b)).or_insert(0) += 1;
    }

    pub fn nodes(&self) -> &BTreeSet<N> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weight of the pair, `0` when there is no edge.
    pub fn weight(&self, a: N, b: N) -> u32 {
        self.weights.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    /// Edges as `(lo, hi, weight)` sorted by `(lo, hi)`.
    pub fn edges(&self) -> impl Iterator<Item = (N, N, u32)> + '_ {
        self.weights.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.values().map(|&w| u64::from(w)).sum()
    }

    fn adjacency(&self) -> BTreeMap<N, Vec<N>> {
        let mut adj: BTreeMap<N, Vec<N>> = self.nodes.iter().map(|&n| (n, Vec::new())).collect();
        for &(a, b) in self.weights.keys() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    /// Connected components, largest first; equal sizes ordered by smallest
    /// member.
    pub fn components(&self) -> Vec<BTreeSet<N>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.nodes {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(n) = queue.pop_front() {
                for &m in &adj[&n] {
                    if seen.insert(m) {
                        comp.insert(m);
                        queue.push_back(m);
                    }
                }
            }
            out.push(comp);
        }
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.first().cmp(&b.first())));
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced on `keep`.
    pub fn induced(&self, keep: &BTreeSet<N>) -> Self {
        WeightedGraph {
            nodes: self.nodes.intersection(keep).copied().collect(),
            weights: self
                .weights
                .iter()
                .filter(|((a, b), _)| keep.contains(a) && keep.contains(b))
                .map(|(k, w)| (*k, *w))
                .collect(),
        }
    }
}

/// Subject co-occurrence graph: two subjects are linked with weight equal
/// to the number of papers adjacent to both.
pub fn project_one_mode(bg: &BipartiteGraph) -> WeightedGraph {
    let mut per_paper: Vec<Vec<SubjectId>> = vec![Vec::new(); bg.papers.len()];
    for &(s, p) in &bg.edges {
        per_paper[p].push(s);
    }
    let mut g = WeightedGraph::new();
    for &s in &bg.subjects {
        g.add_node(s);
    }
    for subjects in &per_paper {
        for (i, &a) in subjects.iter().enumerate() {
            for &b in &subjects[i + 1..] {
                g.increment(a, b);
            }
        }
    }
    g
}

/// Induced subgraph on the largest component (ties: smallest minimum label).
pub fn largest_connected_component<N: NodeLabel>(g: &WeightedGraph<N>) -> WeightedGraph<N> {
    match g.components().into_iter().next() {
        Some(comp) => g.induced(&comp),
        None => WeightedGraph::new(),
    }
}

/// Dense symmetric distance matrix. Non-edges hold `f64::INFINITY`, the
/// diagonal holds `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<N: NodeLabel = SubjectId> {
    nodes: Vec<N>,
    dist: Vec<f64>,
}

impl<N: NodeLabel> DistanceMatrix<N> {
    /// Builds a matrix over `nodes` (sorted, deduplicated) from explicit
    /// entries. Unlisted pairs are infinite.
    pub fn from_entries(
        nodes: impl IntoIterator<Item = N>,
        entries: &[(N, N, f64)],
    ) -> Result<Self, GraphError> {
        let nodes: Vec<N> = nodes
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = nodes.len();
        let mut dist = vec![f64::INFINITY; n * n];
        for i in 0..n {
            dist[i * n + i] = 0.0;
        }
        let mut m = DistanceMatrix { nodes, dist };
        for &(a, b, d) in entries {
            if a == b {
                return Err(GraphError::SelfLoop(a.to_string()));
            }
            if d.is_nan() || d <= 0.0 {
                return Err(GraphError::InvalidDistance {
                    a: a.to_string(),
                    b: b.to_string(),
                    value: d,
                });
            }
            let (i, j) = match (m.index_of(a), m.index_of(b)) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    return Err(GraphError::InvalidDistance {
                        a: a.to_string(),
                        b: b.to_string(),
                        value: d,
                    })
                }
            };
            m.dist[i * n + j] = d;
            m.dist[j * n + i] = d;
        }
        Ok(m)
    }

    pub fn nodes(&self) -> &[N] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, n: N) -> Option<usize> {
        self.nodes.binary_search(&n).ok()
    }

    /// Distance by index.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.nodes.len() + j]
    }

    /// Distance by label; `None` if either label is not in the matrix.
    pub fn distance(&self, a: N, b: N) -> Option<f64> {
        Some(self.get(self.index_of(a)?, self.index_of(b)?))
    }

    /// Finite off-diagonal entries as `(lo, hi, distance)`.
    pub fn finite_pairs(&self) -> Vec<(N, N, f64)> {
        let n = self.nodes.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let d = self.get(i, j);
                if d.is_finite() {
                    out.push((self.nodes[i], self.nodes[j], d));
                }
            }
        }
        out
    }
}

/// `d = 1 / L` for every edge. The graph must be connected.
pub fn to_distance_matrix<N: NodeLabel>(
    g: &WeightedGraph<N>,
) -> Result<DistanceMatrix<N>, GraphError> {
    let components = g.components().len();
    if components > 1 {
        return Err(GraphError::Disconnected { components });
    }
    let entries: Vec<(N, N, f64)> = g
        .edges()
        .map(|(a, b, w)| (a, b, 1.0 / f64::from(w)))
        .collect();
    DistanceMatrix::from_entries(g.nodes().iter().copied(), &entries)
}

/// `subject_i,subject_j,weight` sorted by `(i, j)`.
pub fn write_edge_list<N: NodeLabel, W: Write>(
    g: &WeightedGraph<N>,
    out: W,
) -> Result<(), GraphError> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["subject_i", "subject_j", "weight"])?;
    for (a, b, w) in g.edges() {
        wtr.write_record([a.to_string(), b.to_string(), w.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads the format written by [`write_edge_list`] with arbitrary
/// non-negative integer node labels.
pub fn read_edge_list<R: Read>(input: R) -> Result<WeightedGraph<u32>, GraphError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let headers: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers != ["subject_i", "subject_j", "weight"] {
        return Err(GraphError::Parse {
            line: 1,
            message: format!(
                "expected header `subject_i,subject_j,weight`, found `{}`",
                headers.join(",")
            ),
        });
    }
    let mut g = WeightedGraph::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != 3 {
            return Err(GraphError::Parse {
                line,
                message: format!("expected 3 fields, found {}", row.len()),
            });
        }
        let field = |i: usize| {
            row[i].trim().parse::<u32>().map_err(|_| GraphError::Parse {
                line,
                message: format!("not a non-negative integer: {:?}", &row[i]),
            })
        };
        g.add_edge(field(0)?, field(1)?, field(2)?)?;
    }
    Ok(g)
}

#[derive(Serialize)]
struct JsonNode<'a> {
    code: SubjectId,
    name: &'a str,
    in_component: bool,
}

#[derive(Serialize)]
struct JsonEdge {
    source: SubjectId,
    target: SubjectId,
    weight: u32,
    distance: f64,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    node_count: usize,
    edge_count: usize,
    component_node_count: usize,
    nodes: Vec<JsonNode<'a>>,
    edges: Vec<JsonEdge>,
}

/// Full graph with subject names, flagging members of the largest component.
pub fn graph_json(g: &WeightedGraph, registry: &SubjectRegistry) -> Result<String, GraphError> {
    let component = g.components().into_iter().next().unwrap_or_default();
    let doc = JsonGraph {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        component_node_count: component.len(),
        nodes: g
            .nodes()
            .iter()
            .map(|&code| JsonNode {
                code,
                name: registry.name(code),
                in_component: component.contains(&code),
            })
            .collect(),
        edges: g
            .edges()
            .map(|(source, target, weight)| JsonEdge {
                source,
                target,
                weight,
                distance: 1.0 / f64::from(weight),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::{select, AuthorshipCategory};
    use crate::corpus::{Corpus, PaperRecord};

    fn sid(c: u8) -> SubjectId {
        SubjectId::new(c).unwrap()
    }

    fn corpus(papers: &[(&str, &[u8])]) -> Corpus {
        Corpus::new(
            papers
                .iter()
                .map(|(id, s)| {
                    let s: Vec<_> = s.iter().map(|c| sid(*c)).collect();
                    PaperRecord::with_subjects(*id, 2012, 1, 1, &s).unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    fn network(c: &Corpus) -> WeightedGraph {
        project_one_mode(&induce_bipartite(&select(c, AuthorshipCategory::All, true)))
    }

    #[test]
    fn bipartite_hand_enumeration() {
        let c = corpus(&[("p1", &[3, 8]), ("p2", &[3])]);
        let bg = induce_bipartite(&select(&c, AuthorshipCategory::All, true));
        assert_eq!(bg.subjects, BTreeSet::from([sid(3), sid(8)]));
        assert_eq!(bg.papers, vec!["p1", "p2"]);
        assert_eq!(bg.edges, vec![(sid(3), 0), (sid(8), 0), (sid(3), 1)]);

        let empty = corpus(&[]);
        assert_eq!(
            induce_bipartite(&select(&empty, AuthorshipCategory::All, true)),
            BipartiteGraph::default()
        );

        let one = corpus(&[("p", &[1]), ("q", &[])]);
        let bg = induce_bipartite(&select(&one, AuthorshipCategory::All, false));
        assert_eq!(
            (bg.subjects.len(), bg.papers.len(), bg.edges.len()),
            (1, 1, 1)
        );
    }

    #[test]
    fn projection_hand_example() {
        let c = corpus(&[
            ("p1", &[3, 8]),
            ("p2", &[3, 8, 17]),
            ("p3", &[1]),
            ("p4", &[3, 29]),
        ]);
        let g = network(&c);
        assert_eq!(g.weight(sid(3), sid(8)), 2);
        assert_eq!(g.weight(sid(8), sid(3)), 2);
        assert_eq!(g.weight(sid(3), sid(17)), 1);
        assert_eq!(g.weight(sid(8), sid(17)), 1);
        assert_eq!(g.weight(sid(3), sid(29)), 1);
        assert_eq!(g.edge_count(), 4);
        assert!(g.nodes().contains(&sid(1)));
        assert_eq!(g.weight(sid(1), sid(3)), 0);

        let lcc = largest_connected_component(&g);
        assert_eq!(
            lcc.nodes(),
            &BTreeSet::from([sid(3), sid(8), sid(17), sid(29)])
        );
        assert_eq!(lcc.edge_count(), 4);
        assert_eq!(largest_connected_component(&lcc), lcc);
    }

    #[test]
    fn component_tie_breaks_on_smallest_label() {
        let g = WeightedGraph::from_edges([(10u32, 11, 1), (2, 7, 1), (5, 6, 3)]).unwrap();
        let lcc = largest_connected_component(&g);
        assert_eq!(lcc.nodes(), &BTreeSet::from([2, 7]));
        assert!(largest_connected_component(&WeightedGraph::<u32>::new()).is_empty());
    }

    #[test]
    fn distances_are_reciprocal_weights() {
        let c = corpus(&[("p1", &[3, 8]), ("p2", &[3, 8, 17]), ("p4", &[3, 29])]);
        let d = to_distance_matrix(&network(&c)).unwrap();
        assert_eq!(d.distance(sid(3), sid(8)), Some(0.5));
        assert_eq!(d.distance(sid(3), sid(17)), Some(1.0));
        assert_eq!(d.distance(sid(8), sid(29)), Some(f64::INFINITY));
        assert_eq!(d.distance(sid(29), sid(29)), Some(0.0));
        assert_eq!(d.distance(sid(1), sid(3)), None);
    }

    #[test]
    fn disconnected_distance_matrix_is_error() {
        let c = corpus(&[("p1", &[3, 8]), ("p3", &[1])]);
        assert!(matches!(
            to_distance_matrix(&network(&c)),
            Err(GraphError::Disconnected { components: 2 })
        ));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(WeightedGraph::from_edges([(1u32, 1, 1)]).is_err());
        assert!(WeightedGraph::from_edges([(1u32, 2, 0)]).is_err());
        assert!(WeightedGraph::from_edges([(1u32, 2, 1), (2, 1, 4)]).is_err());
        assert!(DistanceMatrix::from_entries([1u32, 2], &[(1, 2, -1.0)]).is_err());
        assert!(DistanceMatrix::from_entries([1u32, 2], &[(1, 3, 1.0)]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = WeightedGraph::from_edges([(8u32, 3, 2), (3, 17, 1)]).unwrap();
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "subject_i,subject_j,weight\n3,8,2\n3,17,1\n");
        assert_eq!(read_edge_list(text.as_bytes()).unwrap(), g);
        assert!(read_edge_list("a,b,c\n".as_bytes()).is_err());
        assert!(matches!(
            read_edge_list("subject_i,subject_j,weight\n1,2,x\n".as_bytes()),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }
}
