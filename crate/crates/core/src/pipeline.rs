//! End-to-end runs: corpus -> categories -> statistics -> networks ->
//! dendrograms and trees -> metrics, rendered into a directory of files.
//!
//! All outputs are rendered in memory first and written last, so a failed
//! run leaves nothing behind.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::categories::{select, AuthorshipCategory};
use crate::cluster::{
    assign_colors, kruskal_oracle, mst_from_merges, single_link_cluster, ClusterError,
    MergeSequence, SpanningTree, DEFAULT_COLOR_MULTIPLIER,
};
use crate::corpus::{
    ingest_raw, parse_corpus, write_corpus, write_rejects, Corpus, CorpusError, Reject, SubjectId,
    SubjectRegistry,
};
use crate::export::{
    colors_json, dendrogram_json, emit_dot, parse_colors_json, write_metrics_csv,
    write_node_report_csv, MetricsRow,
};
use crate::graph::{
    graph_json, induce_bipartite, largest_connected_component, project_one_mode,
    to_distance_matrix, write_edge_list, GraphError, NodeLabel, WeightedGraph,
};
use crate::lexicon::GenderLexicon;
use crate::motifs::{node_report, tree_metrics, MotifError, TreeMetrics};
use crate::stats::{
    subject_frequencies, summarize, write_subject_freq_csv, write_summary_csv, write_yearly_csv,
    yearly_counts, CategorySummary, StatsError, SubjectCounting,
};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const IO: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: CorpusError },
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}: malformed color file: {source}")]
    Colors {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    EdgeList { path: PathBuf, source: GraphError },
    #[error("category {category}: {source}")]
    Category {
        category: AuthorshipCategory,
        source: Box<Error>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Motif(#[from] MotifError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("rendering failed: {0}")]
    Render(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Colors { .. } => exit::VALIDATION,
            Error::Input { source, .. } => match source {
                CorpusError::Io(_) => exit::IO,
                _ => exit::VALIDATION,
            },
            Error::EdgeList { source, .. } => match source {
                GraphError::Io(_) => exit::IO,
                _ => exit::VALIDATION,
            },
            Error::Read { .. } | Error::Write { .. } => exit::IO,
            Error::Category { source, .. } => source.exit_code(),
            Error::Graph(_)
            | Error::Cluster(_)
            | Error::Motif(_)
            | Error::Stats(_)
            | Error::Render(_) => exit::INTERNAL,
        }
    }

    fn in_category(self, category: AuthorshipCategory) -> Self {
        Error::Category {
            category,
            source: Box::new(self),
        }
    }
}

fn render_err(e: impl std::fmt::Display) -> Error {
    Error::Render(e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Corpus CSV, or raw-record CSV when `lexicon` is set.
    pub input: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub categories: Vec<AuthorshipCategory>,
    pub color_multiplier: f64,
    /// Restrict summary statistics to papers with extra subjects.
    pub xsubject_only: bool,
    /// Count only extra subjects in `mean_subjects`.
    pub extras_only: bool,
    pub top_k: usize,
    /// Saved color assignment to use instead of the one derived from the
    /// `all` network.
    pub colors: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            lexicon: None,
            out_dir: out_dir.into(),
            categories: AuthorshipCategory::ALL.to_vec(),
            color_multiplier: DEFAULT_COLOR_MULTIPLIER,
            xsubject_only: false,
            extras_only: false,
            top_k: 6,
            colors: None,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.color_multiplier.is_finite() && self.color_multiplier > 0.0) {
            return Err(Error::Config(format!(
                "color multiplier must be positive, got {}",
                self.color_multiplier
            )));
        }
        let max = SubjectId::MAX as usize;
        if !(1..=max).contains(&self.top_k) {
            return Err(Error::Config(format!(
                "top-k must be in 1..={max}, got {}",
                self.top_k
            )));
        }
        if self.categories.is_empty() {
            return Err(Error::Config("no categories selected".into()));
        }
        Ok(())
    }

    /// Selected categories, deduplicated, in canonical order.
    pub fn ordered_categories(&self) -> Vec<AuthorshipCategory> {
        AuthorshipCategory::ALL
            .into_iter()
            .filter(|c| self.categories.contains(c))
            .collect()
    }

    fn counting(&self) -> SubjectCounting {
        if self.extras_only {
            SubjectCounting::ExtrasOnly
        } else {
            SubjectCounting::WithMain
        }
    }
}

/// Which artifacts a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Stats,
    Network,
    Mst,
    Report,
}

impl Stage {
    fn stats(self) -> bool {
        matches!(self, Stage::Stats | Stage::Report)
    }

    fn network(self) -> bool {
        matches!(self, Stage::Network | Stage::Report)
    }

    fn mst(self) -> bool {
        matches!(self, Stage::Mst | Stage::Report)
    }
}

/// Loaded corpus plus rows rejected during raw ingestion.
#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub rejects: Vec<Reject>,
    pub ingested: bool,
}

pub fn load_corpus(config: &RunConfig, registry: &SubjectRegistry) -> Result<LoadedCorpus, Error> {
    let open = |path: &Path| {
        fs::File::open(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })
    };
    let input = io::BufReader::new(open(&config.input)?);
    let wrap = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Input { path, source }
    };
    match &config.lexicon {
        Some(lex_path) => {
            let lexicon = GenderLexicon::from_reader(io::BufReader::new(open(lex_path)?))
                .map_err(wrap(lex_path))?;
            let (corpus, rejects) =
                ingest_raw(input, &lexicon, registry).map_err(wrap(&config.input))?;
            Ok(LoadedCorpus {
                corpus,
                rejects,
                ingested: true,
            })
        }
        None => Ok(LoadedCorpus {
            corpus: parse_corpus(input, registry).map_err(wrap(&config.input))?,
            rejects: Vec::new(),
            ingested: false,
        }),
    }
}

/// Network, dendrogram and tree of one category.
#[derive(Debug, Clone)]
pub struct CategoryNetwork {
    pub category: AuthorshipCategory,
    pub papers: usize,
    /// Full co-occurrence graph, isolated subjects included.
    pub graph: WeightedGraph,
    pub component: WeightedGraph,
    pub merges: MergeSequence<SubjectId>,
    pub tree: SpanningTree<SubjectId>,
    pub metrics: Option<TreeMetrics>,
}

/// Builds the network of a category from its papers with extra subjects and
/// runs single-link clustering on its largest component.
pub fn category_network(
    corpus: &Corpus,
    category: AuthorshipCategory,
) -> Result<CategoryNetwork, Error> {
    let subset = select(corpus, category, true);
    let graph = project_one_mode(&induce_bipartite(&subset));
    let component = largest_connected_component(&graph);
    let distances = to_distance_matrix(&component)?;
    let merges = single_link_cluster(&distances)?;
    let tree = mst_from_merges(&merges);
    let metrics = if tree.len() >= 2 {
        Some(tree_metrics(&tree)?)
    } else {
        None
    };
    Ok(CategoryNetwork {
        category,
        papers: subset.len(),
        graph,
        component,
        merges,
        tree,
        metrics,
    })
}

/// What a run produced for one category.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryReport {
    pub category: AuthorshipCategory,
    pub summary: CategorySummary,
    pub metrics: Option<TreeMetrics>,
    pub raw_node_count: usize,
    pub component_node_count: usize,
    pub colors_file: Option<PathBuf>,
    /// Paths relative to the output directory.
    pub files: Vec<PathBuf>,
}

/// Rendered outputs, relative path -> contents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutputBundle {
    pub files: Vec<(PathBuf, String)>,
}

impl OutputBundle {
    fn add(&mut self, path: impl Into<PathBuf>, contents: String) -> PathBuf {
        let path = path.into();
        self.files.push((path.clone(), contents));
        path
    }

    pub fn get(&self, path: impl AsRef<Path>) -> Option<&str> {
        self.files
            .iter()
            .find(|(p, _)| p == path.as_ref())
            .map(|(_, c)| c.as_str())
    }
}

fn csv_string<F, E>(f: F) -> Result<String, Error>
where
    F: FnOnce(&mut Vec<u8>) -> Result<(), E>,
    E: std::fmt::Display,
{
    let mut buf = Vec::new();
    f(&mut buf).map_err(render_err)?;
    String::from_utf8(buf).map_err(render_err)
}

/// Renders every artifact of `stage` without touching the filesystem.
pub fn render(
    config: &RunConfig,
    stage: Stage,
    loaded: &LoadedCorpus,
    registry: &SubjectRegistry,
) -> Result<(Vec<CategoryReport>, OutputBundle), Error> {
    config.validate()?;
    let corpus = &loaded.corpus;
    let categories = config.ordered_categories();
    let mut bundle = OutputBundle::default();

    if loaded.ingested || stage == Stage::Ingest {
        bundle.add("corpus.csv", csv_string(|b| write_corpus(corpus, b))?);
        bundle.add(
            "rejects.csv",
            csv_string(|b| write_rejects(&loaded.rejects, b))?,
        );
    }

    let summaries: Vec<(AuthorshipCategory, CategorySummary)> = categories
        .iter()
        .map(|&c| {
            (
                c,
                summarize(&select(corpus, c, config.xsubject_only), config.counting()),
            )
        })
        .collect();
    let mut reports: Vec<CategoryReport> = summaries
        .iter()
        .map(|(category, summary)| CategoryReport {
            category: *category,
            summary: summary.clone(),
            metrics: None,
            raw_node_count: 0,
            component_node_count: 0,
            colors_file: None,
            files: Vec::new(),
        })
        .collect();
    if stage == Stage::Ingest {
        return Ok((reports, bundle));
    }

    if stage.stats() {
        bundle.add(
            "summary.csv",
            csv_string(|b| write_summary_csv(&summaries, b))?,
        );
        let papers = yearly_counts(corpus, false, false);
        let xsubject = yearly_counts(corpus, true, false);
        let single = yearly_counts(corpus, false, true);
        bundle.add(
            "yearly.csv",
            csv_string(|b| {
                write_yearly_csv(
                    &[
                        ("papers", &papers),
                        ("xsubject", &xsubject),
                        ("single", &single),
                    ],
                    &categories,
                    b,
                )
            })?,
        );
        let freq = subject_frequencies(corpus, config.top_k)?;
        bundle.add(
            "subject_freq.csv",
            csv_string(|b| write_subject_freq_csv(&freq, &categories, registry, b))?,
        );
    }

    if !(stage.network() || stage.mst()) {
        return Ok((reports, bundle));
    }

    let reference_colors = if stage.mst() {
        let colors = match &config.colors {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| Error::Read {
                    path: path.clone(),
                    source,
                })?;
                parse_colors_json(&text).map_err(|source| Error::Colors {
                    path: path.clone(),
                    source,
                })?
            }
            None => {
                let all = category_network(corpus, AuthorshipCategory::All)
                    .map_err(|e| e.in_category(AuthorshipCategory::All))?;
                assign_colors(&all.merges, config.color_multiplier)
                    .map_err(|e| Error::from(e).in_category(AuthorshipCategory::All))?
            }
        };
        bundle.add(
            "colors.json",
            colors_json(&colors, registry).map_err(render_err)?,
        );
        Some(colors)
    } else {
        None
    };

    let mut metric_rows = Vec::new();
    for report in &mut reports {
        let category = report.category;
        let net = category_network(corpus, category).map_err(|e| e.in_category(category))?;
        report.raw_node_count = net.graph.node_count();
        report.component_node_count = net.component.node_count();
        report.metrics = net.metrics;
        let dir = PathBuf::from(category.slug());

        if stage.network() {
            let edges = csv_string(|b| write_edge_list(&net.graph, b))?;
            report.files.push(bundle.add(dir.join("edges.csv"), edges));
            let json = graph_json(&net.graph, registry)
                .map_err(|e| Error::from(e).in_category(category))?;
            report.files.push(bundle.add(dir.join("graph.json"), json));
        }

        if let Some(colors) = &reference_colors {
            let dendro = dendrogram_json(&net.merges).map_err(render_err)?;
            report
                .files
                .push(bundle.add(dir.join("dendrogram.json"), dendro));
            let dot = emit_dot(&net.tree, colors, registry, &net.component);
            report.files.push(bundle.add(dir.join("mst.dot"), dot));
            let nodes =
                csv_string(|b| write_node_report_csv(&node_report(&net.tree), registry, b))?;
            report.files.push(bundle.add(dir.join("nodes.csv"), nodes));
            report.colors_file = Some(PathBuf::from("colors.json"));

            let pct_female =
                summarize(&select(corpus, category, true), SubjectCounting::WithMain).pct_female;
            metric_rows.push(MetricsRow {
                category,
                metrics: net.metrics,
                pct_female,
            });
        }
    }
    if stage.mst() {
        bundle.add(
            "metrics.csv",
            csv_string(|b| write_metrics_csv(&metric_rows, b))?,
        );
    }
    Ok((reports, bundle))
}

/// Writes every file of the bundle under `out_dir`. On failure, files and
/// directories created so far are removed again.
pub fn write_bundle(out_dir: &Path, bundle: &OutputBundle) -> Result<(), Error> {
    let mut created_dirs: Vec<PathBuf> = Vec::new();
    let mut written: Vec<PathBuf> = Vec::new();

    let result = (|| -> Result<(), Error> {
        for (rel, contents) in &bundle.files {
            let path = out_dir.join(rel);
            if let Some(parent) = path.parent() {
                let missing: Vec<PathBuf> = parent
                    .ancestors()
                    .take_while(|p| !p.as_os_str().is_empty() && !p.exists())
                    .map(Path::to_path_buf)
                    .collect();
                fs::create_dir_all(parent).map_err(|source| Error::Write {
                    path: parent.to_path_buf(),
                    source,
                })?;
                created_dirs.extend(missing.into_iter().rev());
            }
            fs::write(&path, contents).map_err(|source| Error::Write {
                path: path.clone(),
                source,
            })?;
            written.push(path);
        }
        Ok(())
    })();

    if result.is_err() {
        for f in written.iter().rev() {
            let _ = fs::remove_file(f);
        }
        for d in created_dirs.iter().rev() {
            let _ = fs::remove_dir(d);
        }
    }
    result
}

/// Loads, renders and writes one stage.
pub fn run_stage(config: &RunConfig, stage: Stage) -> Result<Vec<CategoryReport>, Error> {
    config.validate()?;
    let registry = SubjectRegistry::standard();
    let loaded = load_corpus(config, &registry)?;
    let (reports, bundle) = render(config, stage, &loaded, &registry)?;
    write_bundle(&config.out_dir, &bundle)?;
    Ok(reports)
}

/// The full pipeline.
pub fn run(config: &RunConfig) -> Result<Vec<CategoryReport>, Error> {
    run_stage(config, Stage::Report)
}

/// Outcome of comparing single-link clustering with Kruskal on one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub nodes: usize,
    pub edges: usize,
    pub single_link_total: f64,
    pub kruskal_total: f64,
    pub same_edges: bool,
    pub same_distances: bool,
    pub monotone_merges: bool,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.single_link_total == self.kruskal_total
            && self.same_edges
            && self.same_distances
            && self.monotone_merges
    }
}

/// Runs both spanning-tree routes over `d = 1/L` of a connected graph.
pub fn oracle_check<N: NodeLabel>(g: &WeightedGraph<N>) -> Result<OracleReport, Error> {
    let d = to_distance_matrix(g)?;
    let merges = single_link_cluster(&d)?;
    let tree = mst_from_merges(&merges);
    let oracle = kruskal_oracle(&d)?;
    let sorted = |t: &SpanningTree<N>| {
        let mut v: Vec<f64> = t.edges().iter().map(|e| e.distance).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let mut merge_distances: Vec<f64> = merges.events.iter().map(|e| e.distance).collect();
    let monotone_merges = merge_distances.windows(2).all(|w| w[0] <= w[1]);
    merge_distances.sort_by(f64::total_cmp);
    Ok(OracleReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        single_link_total: tree.total_distance(),
        kruskal_total: oracle.total_distance(),
        same_edges: tree.edge_set() == oracle.edge_set(),
        same_distances: sorted(&tree) == sorted(&oracle) && merge_distances == sorted(&oracle),
        monotone_merges,
    })
}

/// Reads an edge list file for [`oracle_check`].
pub fn load_edge_list(path: &Path) -> Result<WeightedGraph<u32>, Error> {
    let file = fs::File::open(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    crate::graph::read_edge_list(io::BufReader::new(file)).map_err(|source| Error::EdgeList {
        path: path.to_path_buf(),
        source,
    })
}
