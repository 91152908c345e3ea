use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use subjectnet::pipeline::{self, exit, CategoryReport, Error, RunConfig, Stage};
use subjectnet::AuthorshipCategory;

/// Subject co-occurrence networks and minimum spanning trees per
/// gender-based authorship category.
#[derive(Parser)]
#[command(name = "subjectnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert raw records (id,year,authors,subjects) into the corpus format
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summary table, yearly distributions and subject frequencies
    Stats(RunArgs),
    /// Co-occurrence edge lists and graph JSON per category
    Network(RunArgs),
    /// Dendrograms, colored MST DOT files and tree metrics per category
    Mst(RunArgs),
    /// Full pipeline: stats, networks, dendrograms, trees and metrics
    Report(RunArgs),
    /// Compare single-link clustering with Kruskal on an edge list
    OracleCheck {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Corpus CSV (or raw records when --lexicon is given)
    #[arg(long)]
    input: PathBuf,
    /// Gender lexicon; makes --input a raw-record file
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated subset of all,wexc,winc,wm,minc,mexc
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "all,wexc,winc,wm,minc,mexc"
    )]
    categories: Vec<AuthorshipCategory>,
    /// Dendrogram cut multiplier applied to the last merge distance
    #[arg(long = "color-T", default_value_t = 1.2)]
    color_t: f64,
    #[arg(long, default_value_t = 6)]
    top_k: usize,
    /// Restrict summary statistics to papers with extra subjects
    #[arg(long)]
    xsubject_only: bool,
    /// Count only extra subjects in the mean-subjects statistic
    #[arg(long)]
    extras_only: bool,
    /// Saved colors.json to color the trees with
    #[arg(long)]
    colors: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> RunConfig {
        RunConfig {
            input: self.input,
            lexicon: self.lexicon,
            out_dir: self.out,
            categories: self.categories,
            color_multiplier: self.color_t,
            xsubject_only: self.xsubject_only,
            extras_only: self.extras_only,
            top_k: self.top_k,
            colors: self.colors,
        }
    }
}

fn print_reports(reports: &[CategoryReport], stage: Stage) {
    for r in reports {
        let mut line = format!("{:<5} papers={}", r.category.slug(), r.summary.size);
        if matches!(stage, Stage::Network | Stage::Mst | Stage::Report) {
            line.push_str(&format!(
                " nodes={} component={}",
                r.raw_node_count, r.component_node_count
            ));
        }
        if matches!(stage, Stage::Mst | Stage::Report) {
            match &r.metrics {
                Some(m) => line.push_str(&format!(
                    " d={} l={} star_path={:.4} motif_gap={:.4}",
                    m.diameter, m.leaves, m.star_path, m.motif_gap
                )),
                None => line.push_str(" (tree too small for metrics)"),
            }
        }
        println!("{line}");
    }
}

fn execute(command: Command) -> Result<i32, Error> {
    let (config, stage) = match command {
        Command::Ingest {
            input,
            lexicon,
            out,
        } => {
            let mut config = RunConfig::new(input, out);
            config.lexicon = Some(lexicon);
            let registry = subjectnet::SubjectRegistry::standard();
            let loaded = pipeline::load_corpus(&config, &registry)?;
            let (_, bundle) = pipeline::render(&config, Stage::Ingest, &loaded, &registry)?;
            pipeline::write_bundle(&config.out_dir, &bundle)?;
            println!(
                "ingested {} records, rejected {}",
                loaded.corpus.len(),
                loaded.rejects.len()
            );
            for r in &loaded.rejects {
                eprintln!("line {}: {}: {}", r.line, r.id, r.reason);
            }
            return Ok(exit::SUCCESS);
        }
        Command::OracleCheck { input } => {
            let graph = pipeline::load_edge_list(&input)?;
            let report = match pipeline::oracle_check(&graph) {
                Ok(r) => r,
                Err(Error::Graph(e)) => {
                    return Err(Error::EdgeList {
                        path: input,
                        source: e,
                    })
                }
                Err(Error::Cluster(e)) => {
                    return Err(Error::Config(format!("{}: {e}", input.display())))
                }
                Err(e) => return Err(e),
            };
            println!("nodes={} edges={}", report.nodes, report.edges);
            println!("single-link total distance = {}", report.single_link_total);
            println!("kruskal total distance     = {}", report.kruskal_total);
            println!("identical edge sets        = {}", report.same_edges);
            println!("identical distance multiset = {}", report.same_distances);
            println!("monotone merge distances   = {}", report.monotone_merges);
            if report.passed() {
                println!("PASS");
                return Ok(exit::SUCCESS);
            }
            println!("FAIL");
            return Ok(exit::INTERNAL);
        }
        Command::Stats(args) => (args.into_config(), Stage::Stats),
        Command::Network(args) => (args.into_config(), Stage::Network),
        Command::Mst(args) => (args.into_config(), Stage::Mst),
        Command::Report(args) => (args.into_config(), Stage::Report),
    };
    let reports = pipeline::run_stage(&config, stage)?;
    print_reports(&reports, stage);
    Ok(exit::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::VALIDATION as u8),
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
