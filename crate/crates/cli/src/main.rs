//! `pqdist`: batch driver for two-distance set classification in `ℝ^{p,q}`.

mod check;
mod verify;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use pqdist::constructions::{
    construct_22point, construct_family_pq1, construct_family_pq1_ambient,
    construct_johnson_family, realize, ConstructionError, PointSet,
};
use pqdist::embedding::DissimilarityMatrix;
use pqdist::graph::generate::children;
use pqdist::graph::{generate_all, graph6_decode, graph6_encode, Graph};
use pqdist::search::{
    cell_checkpoint_exists, checkpointed_cells, classify, clear_cell, inspect_cell, run_cell,
    ClassificationReport, ClassifyOptions, SearchError,
};
use pqdist::spherical::{classify_spherical, classify_spherical_with};

/// Base order from which a cell counts as a long run.
const LONG_BASE_ORDER: usize = 10;

#[derive(Parser)]
#[command(
    name = "pqdist",
    version,
    about = "Largest two-distance sets in pseudo-Euclidean spaces"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the largest proper two-distance sets of a cell.
    Classify(RunArgs),
    /// Classify the largest proper spherical two-distance sets of a cell.
    Spherical(SphericalArgs),
    /// Analyse one graph: admissible distances, embedding dimension, type and sphere.
    CheckGraph(CheckArgs),
    /// Compare computed cells against the published tables.
    VerifyTables(verify::VerifyArgs),
    /// Write an explicit point set.
    Construct(ConstructArgs),
    /// Stream every graph of order `n` up to isomorphism as graph6.
    Generate {
        #[arg(long)]
        n: usize,
    },
    /// Inspect or clear stored search levels.
    Checkpoint {
        #[command(subcommand)]
        action: CheckpointAction,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Stop extending levels at this order (the report is then marked truncated).
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long, env = "PQDIST_CHECKPOINT_DIR")]
    checkpoint_dir: Option<PathBuf>,
    /// Continue from the levels stored in the checkpoint directory.
    #[arg(long, requires = "checkpoint_dir")]
    resume: bool,
    /// Permit cells whose base order is 10.
    #[arg(long)]
    allow_long: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    /// Omit elapsed time and worker count from JSON.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct SphericalArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Read contributing cells only from finished checkpoints.
    #[arg(long, requires = "checkpoint_dir")]
    from_checkpoints: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Graph6,
    Dot,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum BranchChoice {
    Plus,
    Minus,
    Both,
}

#[derive(Args)]
struct CheckArgs {
    /// Graph in graph6 format.
    graph6: String,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value_t = BranchChoice::Both)]
    branch: BranchChoice,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    family: Family,
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PointFormat::Json, global = true)]
    format: PointFormat,
    /// Significant digits in CSV output.
    #[arg(long, default_value_t = 17, global = true)]
    digits: usize,
}

#[derive(Subcommand)]
enum Family {
    /// The 22-point set in `ℝ^{6,1}`.
    Twentytwo,
    /// The `n(n+3)/2`-point family in `ℝ^{n,1}`, `n ≥ 7`.
    FamilyPq1 {
        #[arg(long)]
        n: usize,
        /// Keep the ambient `ℝ^{n+1,1}` coordinates.
        #[arg(long)]
        ambient: bool,
    },
    /// The `1 + p + p(p−1)/2`-point family in `ℝ^{p,1}`, `p ≥ 5`.
    Johnson {
        #[arg(long)]
        p: usize,
    },
    /// Numeric points for a dissimilarity matrix read as JSON rows of rationals.
    Realize {
        /// File holding `[["0","1",...],...]`, or `-` for stdin.
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PointFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum CheckpointAction {
    /// List stored cells, buckets and level sizes.
    List {
        #[arg(long, env = "PQDIST_CHECKPOINT_DIR")]
        dir: PathBuf,
    },
    /// Read back every level file of one cell.
    Verify {
        #[arg(long, env = "PQDIST_CHECKPOINT_DIR")]
        dir: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Delete the stored levels of one cell.
    Clear {
        #[arg(long, env = "PQDIST_CHECKPOINT_DIR")]
        dir: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
}

/// Process outcome mapped onto exit codes.
pub enum Failure {
    Mismatch(String),
    Tier(String),
    Io(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Tier(_) => 2,
            Failure::Io(_) => 3,
            Failure::Input(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Tier(m) | Failure::Io(m) | Failure::Input(m) => m,
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let m = e.to_string();
        match e {
            SearchError::TierExceeded { .. } => Failure::Tier(m),
            SearchError::Io { .. } => Failure::Io(m),
            _ => Failure::Input(m),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::ToleranceExceeded { .. } => Failure::Mismatch(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let progress: Option<pqdist::search::classify::Progress> = if cli.quiet {
        None
    } else {
        Some(Arc::new(|m: &str| eprintln!("{m}")))
    };
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(&a, progress),
        Command::Spherical(a) => cmd_spherical(&a, progress),
        Command::CheckGraph(a) => {
            check::cmd_check_graph(&a.graph6, a.p, a.q, a.branch, a.format == TextFormat::Json)
        }
        Command::VerifyTables(a) => verify::cmd_verify_tables(&a, progress),
        Command::Construct(a) => cmd_construct(&a),
        Command::Generate { n } => cmd_generate(n),
        Command::Checkpoint { action } => cmd_checkpoint(&action),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

/// Rejects `p < q` and long cells without `--allow-long`.
pub fn guard(p: usize, q: usize, cells: &[(usize, usize)], allow_long: bool) -> Outcome {
    if p < q {
        return Err(Failure::Input(format!(
            "cells are taken with p ≥ q; the sets of ({p}, {q}) are the negations of those of ({q}, {p})"
        )));
    }
    for &(a, b) in cells {
        let n = a + b + 3;
        if n > pqdist::search::MAX_BASE_ORDER {
            return Err(Failure::Tier(format!(
                "cell ({a}, {b}) needs base order {n}, beyond the supported 10"
            )));
        }
        if n >= LONG_BASE_ORDER && !allow_long {
            return Err(Failure::Tier(format!(
                "cell ({a}, {b}) enumerates all graphs of order {n}; pass --allow-long to run it"
            )));
        }
    }
    Ok(())
}

fn options(a: &RunArgs, progress: Option<pqdist::search::classify::Progress>) -> ClassifyOptions {
    ClassifyOptions {
        max_order: a.max_order,
        checkpoint_dir: a.checkpoint_dir.clone(),
        resume: a.resume,
        progress,
    }
}

fn render(report: &ClassificationReport, a: &RunArgs) -> String {
    match a.format {
        ReportFormat::Json if a.deterministic => report.to_json_deterministic(),
        ReportFormat::Json => report.to_json(),
        ReportFormat::Graph6 => {
            let mut lines: Vec<String> = report
                .configurations
                .iter()
                .map(|c| c.graph6.clone())
                .collect();
            lines.extend(report.families.iter().map(|f| f.graph6.clone()));
            lines.dedup();
            lines.join("\n")
        }
        ReportFormat::Dot => report.to_dot(),
    }
}

fn cmd_classify(a: &RunArgs, progress: Option<pqdist::search::classify::Progress>) -> Outcome {
    guard(a.p, a.q, &[(a.p, a.q)], a.allow_long)?;
    let report = classify(a.p, a.q, &options(a, progress))?;
    emit(a.output.as_deref(), &render(&report, a))
}

fn cmd_spherical(
    s: &SphericalArgs,
    progress: Option<pqdist::search::classify::Progress>,
) -> Outcome {
    let a = &s.run;
    let cells: Vec<(usize, usize)> = pqdist::spherical::spherical_sources(a.p, a.q)
        .iter()
        .map(|c| (c.p.max(c.q), c.p.min(c.q)))
        .collect();
    guard(a.p, a.q, &cells, a.allow_long)?;
    let opts = options(a, progress);
    let report = if s.from_checkpoints {
        let root = a.checkpoint_dir.clone().expect("required by clap");
        let mut get = |p: usize, q: usize| {
            if !cell_checkpoint_exists(&root, p, q) {
                return Err(SearchError::CheckpointMismatch(format!(
                    "cell ({p}, {q}) has no checkpoint in {}; run `pqdist classify --p {p} --q {q} --checkpoint-dir {}` first",
                    root.display(),
                    root.display()
                )));
            }
            let o = ClassifyOptions {
                resume: true,
                ..opts.clone()
            };
            run_cell(p, q, &o)
        };
        match classify_spherical_with(a.p, a.q, &mut get) {
            Err(SearchError::CheckpointMismatch(m)) if m.contains("has no checkpoint") => {
                return Err(Failure::Io(m))
            }
            r => r?,
        }
    } else {
        classify_spherical(a.p, a.q, &opts)?
    };
    emit(a.output.as_deref(), &render(&report, a))
}

fn read_matrix(path: &Path) -> Result<DissimilarityMatrix, Failure> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin())?
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    let rows: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("matrix JSON: {e}")))?;
    let n = rows.len();
    let mut m = pqdist::spectral::RatMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Failure::Input(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, v) in row.iter().enumerate() {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(x) => x.to_string(),
                _ => return Err(Failure::Input(format!("entry ({i}, {j}) is not a number"))),
            };
            let r = pqdist::arith::rational::parse_rational(&s)
                .map_err(|e| Failure::Input(format!("entry ({i}, {j}): {e}")))?;
            m.set(i, j, r);
        }
    }
    DissimilarityMatrix::rational(m).map_err(|e| Failure::Input(e.to_string()))
}

fn cmd_construct(a: &ConstructArgs) -> Outcome {
    let set: PointSet = match &a.family {
        Family::Twentytwo => construct_22point(),
        Family::FamilyPq1 { n, ambient: false } => construct_family_pq1(*n)?,
        Family::FamilyPq1 { n, ambient: true } => construct_family_pq1_ambient(*n)?,
        Family::Johnson { p } => construct_johnson_family(*p)?,
        Family::Realize { matrix, tolerance } => realize(&read_matrix(matrix)?, *tolerance)?,
    };
    if set.is_exact() {
        let values = set.distance_values().expect("exact coordinates");
        let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        let status = if values.len() <= 2 { "PASS" } else { "FAIL" };
        eprintln!(
            "{} points in R^{{{}}}, distances {{{}}}: {status}",
            set.len(),
            set.signature,
            shown.join(", ")
        );
        if values.len() > 2 {
            return Err(Failure::Mismatch(format!(
                "{} distinct distances",
                values.len()
            )));
        }
    }
    let text = match a.format {
        PointFormat::Json => set.to_json(),
        PointFormat::Csv => set.to_csv(a.digits),
    };
    emit(a.output.as_deref(), &text)
}

fn cmd_generate(n: usize) -> Outcome {
    if n == 0 || n > pqdist::search::MAX_BASE_ORDER {
        return Err(Failure::Input(format!(
            "order must lie in 1..={}",
            pqdist::search::MAX_BASE_ORDER
        )));
    }
    let mut out = BufWriter::new(io::stdout().lock());
    if n == 1 {
        writeln!(out, "{}", graph6_encode(&Graph::empty(1)))?;
        return Ok(out.flush()?);
    }
    let parents = generate_all(n - 1);
    for chunk in parents.chunks(4096) {
        let kids: Vec<Vec<Graph>> = chunk.par_iter().map(children).collect();
        for g in kids.iter().flatten() {
            writeln!(out, "{}", graph6_encode(g))?;
        }
    }
    Ok(out.flush()?)
}

fn cmd_checkpoint(action: &CheckpointAction) -> Outcome {
    match action {
        CheckpointAction::List { dir } => {
            for (p, q) in checkpointed_cells(dir)? {
                let cell = inspect_cell(dir, p, q)?;
                let state = if cell.finished() {
                    "finished"
                } else {
                    "unfinished"
                };
                println!(
                    "cell ({p}, {q}) {state}, {} buckets, {} boundary graphs",
                    cell.buckets.len(),
                    cell.boundary_graphs
                );
                for (name, m) in &cell.buckets {
                    let sizes: Vec<String> = m
                        .levels
                        .iter()
                        .map(|s| format!("n={}:{}/{}", s.n, s.l, s.lprime))
                        .collect();
                    println!(
                        "  {name} branch {} λ ≈ {}  {}",
                        m.key.branch,
                        m.key.root.to_decimal(10),
                        sizes.join(" ")
                    );
                }
            }
            Ok(())
        }
        CheckpointAction::Verify { dir, p, q } => {
            let cell = inspect_cell(dir, *p, *q)?;
            let levels: usize = cell.buckets.iter().map(|(_, m)| m.levels.len()).sum();
            println!(
                "cell ({p}, {q}): {} buckets, {levels} level files read back",
                cell.buckets.len()
            );
            Ok(())
        }
        CheckpointAction::Clear { dir, p, q } => {
            if clear_cell(dir, *p, *q)? {
                println!("removed cell ({p}, {q})");
            } else {
                println!("no checkpoint for cell ({p}, {q})");
            }
            Ok(())
        }
    }
}

/// Decodes a graph6 string into a graph.
pub fn parse_graph(s: &str) -> Result<Graph, Failure> {
    graph6_decode(s.trim()).map_err(|e| Failure::Input(format!("malformed graph6 {s:?}: {e}")))
}
