//! Text renderings of trees, dendrograms, color assignments and metrics.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::categories::AuthorshipCategory;
use crate::cluster::{ColorAssignment, MergeSequence, SpanningTree};
use crate::corpus::{SubjectId, SubjectRegistry};
use crate::graph::WeightedGraph;
use crate::motifs::{NodeReport, TreeMetrics};
use crate::stats::fmt_real;

/// Fill colors by color index, cycled when there are more clusters.
pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#bcbd22",
    "#17becf", "#aec7e8", "#ffbb78", "#98df8a",
];

/// Fill for nodes missing from the color assignment.
pub const UNCOLORED: &str = "#d9d9d9";

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected DOT graph of the tree. Nodes are labeled with subject names
/// and filled by color index; edges are labeled with co-occurrence weights.
pub fn emit_dot(
    tree: &SpanningTree<SubjectId>,
    colors: &ColorAssignment<SubjectId>,
    registry: &SubjectRegistry,
    weights: &WeightedGraph,
) -> String {
    let mut s = String::new();
    s.push_str("graph mst {\n");
    s.push_str("  graph [overlap=false];\n");
    s.push_str("  node [shape=ellipse, style=filled, fontname=\"Helvetica\"];\n");
    for &node in tree.nodes() {
        let fill = colors
            .color_of(node)
            .map_or(UNCOLORED, |c| PALETTE[c % PALETTE.len()]);
        let _ = writeln!(
            s,
            "  {} [label=\"{}\", fillcolor=\"{}\"];",
            node,
            dot_escape(registry.name(node)),
            fill
        );
    }
    for (a, b) in tree.edge_set() {
        let _ = writeln!(s, "  {} -- {} [label=\"{}\"];", a, b, weights.weight(a, b));
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct DendrogramEvent<N> {
    step: usize,
    cluster_a: usize,
    cluster_b: usize,
    distance: f64,
    edge: [N; 2],
    members: Vec<N>,
}

#[derive(Serialize)]
struct Dendrogram<N> {
    nodes: Vec<N>,
    thr: f64,
    events: Vec<DendrogramEvent<N>>,
}

pub fn dendrogram_json<N: Serialize + Copy>(seq: &MergeSequence<N>) -> serde_json::Result<String> {
    let doc = Dendrogram {
        nodes: seq.nodes.clone(),
        thr: seq.thr,
        events: seq
            .events
            .iter()
            .map(|e| DendrogramEvent {
                step: e.step,
                cluster_a: e.cluster_a,
                cluster_b: e.cluster_b,
                distance: e.distance,
                edge: [e.edge.0, e.edge.1],
                members: e.members.clone(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct ColorEntry {
    code: SubjectId,
    #[serde(default)]
    name: String,
    color: usize,
}

#[derive(Serialize, Deserialize)]
struct ColorFile {
    multiplier: f64,
    cut: f64,
    colors: Vec<ColorEntry>,
}

pub fn colors_json(
    colors: &ColorAssignment<SubjectId>,
    registry: &SubjectRegistry,
) -> serde_json::Result<String> {
    let doc = ColorFile {
        multiplier: colors.multiplier,
        cut: colors.cut,
        colors: colors
            .colors
            .iter()
            .map(|(&code, &color)| ColorEntry {
                code,
                name: registry.name(code).to_string(),
                color,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Reads a file written by [`colors_json`]; names are informational only.
pub fn parse_colors_json(text: &str) -> serde_json::Result<ColorAssignment<SubjectId>> {
    let doc: ColorFile = serde_json::from_str(text)?;
    Ok(ColorAssignment {
        multiplier: doc.multiplier,
        cut: doc.cut,
        colors: doc.colors.into_iter().map(|e| (e.code, e.color)).collect(),
    })
}

/// One row of the metrics table. `metrics` is `None` when the category's
/// tree has fewer than two nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub category: AuthorshipCategory,
    pub metrics: Option<TreeMetrics>,
    pub pct_female: Option<f64>,
}

/// `category,N,d,l,star_path,motif_gap,pct_female`
pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], out: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "category",
        "N",
        "d",
        "l",
        "star_path",
        "motif_gap",
        "pct_female",
    ])?;
    for row in rows {
        let mut rec = vec![row.category.slug().to_string()];
        match &row.metrics {
            Some(m) => rec.extend([
                m.n.to_string(),
                m.diameter.to_string(),
                m.leaves.to_string(),
                fmt_real(m.star_path),
                fmt_real(m.motif_gap),
            ]),
            None => rec.extend(std::iter::repeat_n(String::new(), 5)),
        }
        rec.push(row.pct_female.map(fmt_real).unwrap_or_default());
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// `code,subject,degree,eccentricity,is_leaf,is_center`
pub fn write_node_report_csv<W: Write>(
    report: &NodeReport<SubjectId>,
    registry: &SubjectRegistry,
    out: W,
) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "code",
        "subject",
        "degree",
        "eccentricity",
        "is_leaf",
        "is_center",
    ])?;
    for s in &report.nodes {
        wtr.write_record([
            s.node.to_string(),
            registry.name(s.node).to_string(),
            s.degree.to_string(),
            s.eccentricity.to_string(),
            s.is_leaf.to_string(),
            s.is_center.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
