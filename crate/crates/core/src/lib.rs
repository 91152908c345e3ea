//! Gender-partitioned subject co-occurrence networks.
//!
//! Papers are split into authorship categories by the gender of their
//! authors. Each category induces a weighted network of co-occurring
//! secondary subjects, which is reduced to a minimum spanning tree by
//! single-link clustering on reciprocal weights. Tree-shape coefficients
//! then place each tree between a star and a path.

pub mod categories;
pub mod cluster;
pub mod corpus;
pub mod export;
pub mod graph;
pub mod lexicon;
pub mod motifs;
pub mod pipeline;
pub mod stats;

pub use categories::{categorize, select, AuthorshipCategory, CategorySubset};
pub use cluster::{
    assign_colors, kruskal_oracle, mst_from_merges, single_link_cluster, ColorAssignment,
    MergeEvent, MergeSequence, SpanningTree, TreeEdge,
};
pub use corpus::{
    infer_gender_counts, ingest_raw, parse_corpus, write_corpus, Corpus, PaperRecord, SubjectId,
    SubjectRegistry,
};
pub use graph::{
    induce_bipartite, largest_connected_component, project_one_mode, to_distance_matrix,
    BipartiteGraph, DistanceMatrix, WeightedGraph,
};
pub use lexicon::{Gender, GenderLexicon};
pub use motifs::{node_report, tree_metrics, NodeReport, TreeMetrics};
pub use pipeline::{run, run_stage, RunConfig, Stage};
pub use stats::{subject_frequencies, summarize, yearly_counts, CategorySummary, SubjectCounting};
