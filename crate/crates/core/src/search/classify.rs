//! Whole-cell classification and its JSON report.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checkpoint::{
    bucket_dir_name, checkpoint_finish, checkpoint_load, checkpoint_load_lprime, checkpoint_save,
    io_err, write_atomic, CheckpointManifest, LevelSize,
};
use super::level::{build_base_levels, extend_level, verify_representable, SearchLevel};
use super::{LambdaKey, SearchError, MAX_BASE_ORDER};
use crate::arith::AlgebraicNumber;
use crate::embedding::{
    classify_type, scan_small_orders, BRegion, Branch, DissimilarityMatrix, RepresentationType,
    ScanHit,
};
use crate::graph::{graph6_decode, graph6_encode, Graph};
use crate::spectral::Signature;
use crate::spherical::spherical_radius;

pub type Progress = Arc<dyn Fn(&str) + Send + Sync>;

#[derive(Clone, Default)]
pub struct ClassifyOptions {
    /// Stop extending once this order is reached.
    pub max_order: Option<usize>,
    pub checkpoint_dir: Option<PathBuf>,
    pub resume: bool,
    pub progress: Option<Progress>,
}

impl ClassifyOptions {
    fn say(&self, msg: &str) {
        if let Some(p) = &self.progress {
            p(msg);
        }
    }
}

/// `L'` members of one bucket at every computed order.
#[derive(Clone, Debug)]
pub struct BucketRun {
    pub key: LambdaKey,
    pub sizes: Vec<LevelSize>,
    pub lprime: Vec<(usize, Vec<Graph>)>,
}

/// Raw search data of one cell.
#[derive(Clone, Debug)]
pub struct CellRun {
    pub p: usize,
    pub q: usize,
    pub branches: Vec<Branch>,
    pub buckets: Vec<BucketRun>,
    pub boundary: Vec<(Graph, Branch)>,
    pub truncated: bool,
}

/// Branches searched for a cell; `(p, p)` needs only `a = +1`.
pub fn cell_branches(p: usize, q: usize) -> Vec<Branch> {
    if p == q {
        vec![Branch::Plus]
    } else {
        vec![Branch::Plus, Branch::Minus]
    }
}

#[derive(Serialize, Deserialize)]
struct CellIndex {
    schema: u32,
    p: usize,
    q: usize,
    buckets: Vec<String>,
    boundary: Vec<(String, Branch)>,
}

fn cell_dir(root: &Path, p: usize, q: usize) -> PathBuf {
    root.join(format!("cell_p{p}_q{q}"))
}

fn describe(key: &LambdaKey) -> String {
    format!(
        "branch {} λ = {}",
        key.branch,
        key.root
            .closed_form()
            .unwrap_or_else(|| key.root.to_decimal(8))
    )
}

/// Extends one bucket until `L'` empties, storing each level when `dir` is set.
fn run_bucket(
    p: usize,
    q: usize,
    start: SearchLevel,
    mut run: BucketRun,
    dir: Option<&Path>,
    opts: &ClassifyOptions,
) -> Result<(BucketRun, bool), SearchError> {
    let mut level = start;
    let mut truncated = false;
    loop {
        if level.lprime_len() == 0 {
            break;
        }
        if opts.max_order.is_some_and(|m| level.n >= m) {
            truncated = true;
            break;
        }
        let next = extend_level(&level);
        opts.say(&format!(
            "({p},{q}) {} n={}: |L|={} |L'|={}",
            describe(&level.key),
            next.n,
            next.len(),
            next.lprime_len()
        ));
        if let Some(d) = dir {
            checkpoint_save(d, p, q, &next)?;
        }
        run.sizes.push(LevelSize {
            n: next.n,
            l: next.len(),
            lprime: next.lprime_len(),
        });
        run.lprime.push((next.n, next.lprime().copied().collect()));
        level = next;
    }
    if let (Some(d), false) = (dir, truncated) {
        checkpoint_finish(d)?;
    }
    Ok((run, truncated))
}

fn fresh_bucket(level: &SearchLevel) -> BucketRun {
    BucketRun {
        key: level.key.clone(),
        sizes: vec![LevelSize {
            n: level.n,
            l: level.len(),
            lprime: level.lprime_len(),
        }],
        lprime: vec![(level.n, level.lprime().copied().collect())],
    }
}

/// Runs the level search of cell `(p, q)` on all of its branches.
pub fn run_cell(p: usize, q: usize, opts: &ClassifyOptions) -> Result<CellRun, SearchError> {
    let n0 = p + q + 3;
    if n0 > MAX_BASE_ORDER {
        return Err(SearchError::TierExceeded { p, q, order: n0 });
    }
    let branches = cell_branches(p, q);
    let cdir = opts.checkpoint_dir.as_ref().map(|r| cell_dir(r, p, q));
    if let (Some(d), true) = (&cdir, opts.resume) {
        if d.join("cell.json").exists() {
            return resume_cell(p, q, d, branches, opts);
        }
    }
    opts.say(&format!("({p},{q}) building base levels of order {n0}"));
    let base = build_base_levels(p, q, &branches)?;
    opts.say(&format!("({p},{q}) {} λ-buckets", base.levels.len()));
    let mut names = Vec::new();
    if let Some(d) = &cdir {
        if d.exists() {
            fs::remove_dir_all(d).map_err(io_err(d))?;
        }
        fs::create_dir_all(d).map_err(io_err(d))?;
        let mut counters = [0usize; 2];
        for level in &base.levels {
            let slot = &mut counters[(level.key.branch == Branch::Minus) as usize];
            let name = bucket_dir_name(level.key.branch, *slot);
            *slot += 1;
            checkpoint_save(&d.join(&name), p, q, level)?;
            names.push(name);
        }
        let index = CellIndex {
            schema: 1,
            p,
            q,
            buckets: names.clone(),
            boundary: base
                .boundary
                .iter()
                .map(|(g, b)| (graph6_encode(g), *b))
                .collect(),
        };
        let text = serde_json::to_string_pretty(&index).expect("index serializes");
        write_atomic(&d.join("cell.json"), text.as_bytes())?;
    }
    let mut buckets = Vec::new();
    let mut truncated = false;
    for (i, level) in base.levels.into_iter().enumerate() {
        let dir = cdir.as_ref().map(|d| d.join(&names[i]));
        let run = fresh_bucket(&level);
        let (run, t) = run_bucket(p, q, level, run, dir.as_deref(), opts)?;
        truncated |= t;
        buckets.push(run);
    }
    Ok(CellRun {
        p,
        q,
        branches,
        buckets,
        boundary: base.boundary,
        truncated,
    })
}

fn read_index(d: &Path, p: usize, q: usize) -> Result<CellIndex, SearchError> {
    let path = d.join("cell.json");
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let index: CellIndex =
        serde_json::from_str(&text).map_err(|e| SearchError::CorruptCheckpoint {
            file: path.display().to_string(),
            record: 0,
            reason: e.to_string(),
        })?;
    if (index.p, index.q) != (p, q) {
        return Err(SearchError::CheckpointMismatch(format!(
            "{} holds cell ({}, {})",
            path.display(),
            index.p,
            index.q
        )));
    }
    Ok(index)
}

fn resume_cell(
    p: usize,
    q: usize,
    d: &Path,
    branches: Vec<Branch>,
    opts: &ClassifyOptions,
) -> Result<CellRun, SearchError> {
    let index = read_index(d, p, q)?;
    let path = d.join("cell.json");
    opts.say(&format!(
        "({p},{q}) resuming {} buckets from {}",
        index.buckets.len(),
        d.display()
    ));
    let mut boundary = Vec::new();
    for (i, (s, b)) in index.boundary.iter().enumerate() {
        let g = graph6_decode(s).map_err(|e| SearchError::CorruptCheckpoint {
            file: path.display().to_string(),
            record: i,
            reason: e.to_string(),
        })?;
        boundary.push((g, *b));
    }
    let mut buckets = Vec::new();
    let mut truncated = false;
    for name in &index.buckets {
        let bdir = d.join(name);
        let manifest = super::checkpoint::checkpoint_validate(&bdir, p, q, None)?;
        let mut run = BucketRun {
            key: manifest.key.clone(),
            sizes: manifest.levels.clone(),
            lprime: Vec::new(),
        };
        for s in &manifest.levels {
            run.lprime.push((s.n, checkpoint_load_lprime(&bdir, s.n)?));
        }
        if manifest.finished {
            buckets.push(run);
            continue;
        }
        let level = checkpoint_load(&bdir)?;
        let (run, t) = run_bucket(p, q, level, run, Some(&bdir), opts)?;
        truncated |= t;
        buckets.push(run);
    }
    Ok(CellRun {
        p,
        q,
        branches,
        buckets,
        boundary,
        truncated,
    })
}

/// Stored state of one cell under a checkpoint root.
#[derive(Clone, Debug, Serialize)]
pub struct CellCheckpoint {
    pub p: usize,
    pub q: usize,
    pub path: PathBuf,
    pub buckets: Vec<(String, CheckpointManifest)>,
    pub boundary_graphs: usize,
}

impl CellCheckpoint {
    pub fn finished(&self) -> bool {
        self.buckets.iter().all(|(_, m)| m.finished)
    }
}

/// Whether `root` holds a checkpoint of cell `(p, q)`.
pub fn cell_checkpoint_exists(root: &Path, p: usize, q: usize) -> bool {
    cell_dir(root, p, q).join("cell.json").exists()
}

/// Cells with a checkpoint under `root`, sorted.
pub fn checkpointed_cells(root: &Path) -> Result<Vec<(usize, usize)>, SearchError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(root).map_err(io_err(root))? {
        let entry = entry.map_err(io_err(root))?;
        let name = entry.file_name();
        let Some(rest) = name.to_str().and_then(|s| s.strip_prefix("cell_p")) else {
            continue;
        };
        let Some((p, q)) = rest.split_once("_q") else {
            continue;
        };
        if let (Ok(p), Ok(q)) = (p.parse(), q.parse()) {
            if cell_checkpoint_exists(root, p, q) {
                out.push((p, q));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Reads and validates every manifest and level file of a cell checkpoint.
pub fn inspect_cell(root: &Path, p: usize, q: usize) -> Result<CellCheckpoint, SearchError> {
    let d = cell_dir(root, p, q);
    let index = read_index(&d, p, q)?;
    let mut buckets = Vec::new();
    for name in &index.buckets {
        let bdir = d.join(name);
        let manifest = super::checkpoint::checkpoint_validate(&bdir, p, q, None)?;
        for s in &manifest.levels {
            let level = super::checkpoint::checkpoint_load_level(&bdir, s.n)?;
            if level.len() != s.l || level.lprime_len() != s.lprime {
                return Err(SearchError::CheckpointMismatch(format!(
                    "{} level {} holds {} graphs ({} proper), manifest says {} ({})",
                    bdir.display(),
                    s.n,
                    level.len(),
                    level.lprime_len(),
                    s.l,
                    s.lprime
                )));
            }
        }
        buckets.push((name.clone(), manifest));
    }
    Ok(CellCheckpoint {
        p,
        q,
        path: d,
        buckets,
        boundary_graphs: index.boundary.len(),
    })
}

/// Deletes the checkpoint of cell `(p, q)`, returning whether one existed.
pub fn clear_cell(root: &Path, p: usize, q: usize) -> Result<bool, SearchError> {
    let d = cell_dir(root, p, q);
    if !d.exists() {
        return Ok(false);
    }
    fs::remove_dir_all(&d).map_err(io_err(&d))?;
    Ok(true)
}

/// An exact algebraic value with its closed form (when quadratic or rational) and decimals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exact {
    pub value: AlgebraicNumber,
    pub closed_form: Option<String>,
    pub decimal: String,
}

impl Exact {
    pub fn new(x: &AlgebraicNumber) -> Self {
        Exact {
            value: x.clone(),
            closed_form: x.closed_form(),
            decimal: x.to_decimal(15),
        }
    }
}

/// One classified set: a graph with distances `a = ±1` on edges and `b` on non-edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Configuration {
    pub order: usize,
    pub graph6: String,
    pub branch: Branch,
    pub lambda: Exact,
    pub b: Exact,
    pub dimension: Signature,
    pub representation_type: RepresentationType,
    /// Type of `−D`.
    pub negated_type: RepresentationType,
    pub spherical: bool,
    /// Squared radius `r = a/2` of the sphere in the embedding space, for type 2.
    pub radius: Option<Exact>,
}

impl Configuration {
    pub fn from_graph(
        g: &Graph,
        branch: Branch,
        lambda: &AlgebraicNumber,
    ) -> Result<Self, SearchError> {
        let b = branch.distance(lambda)?;
        let d = DissimilarityMatrix::relation(*g, branch, b.clone())?;
        let neg = DissimilarityMatrix::relation(*g, branch.flip(), b.neg())?;
        let t = classify_type(&d)?;
        let radius = if t == RepresentationType(2) {
            Some(Exact::new(&spherical_radius(&d)?.r))
        } else {
            None
        };
        Ok(Configuration {
            order: g.order(),
            graph6: graph6_encode(g),
            branch,
            lambda: Exact::new(lambda),
            b: Exact::new(&b),
            dimension: crate::embedding::embedding_dimension(&d),
            representation_type: t,
            negated_type: classify_type(&neg)?,
            spherical: t == RepresentationType(2),
            radius,
        })
    }

    pub fn graph(&self) -> Graph {
        graph6_decode(&self.graph6).expect("reports hold valid graph6")
    }

    fn sort_key(&self) -> (Branch, AlgebraicNumber, Graph) {
        (self.branch, self.lambda.value.clone(), self.graph())
    }
}

pub(crate) fn sort_configurations(v: &mut [Configuration]) {
    v.sort_by_cached_key(|c| c.sort_key());
}

/// A graph representable on a whole open interval of distances.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Family {
    pub order: usize,
    pub graph6: String,
    pub branch: Branch,
    pub b_low: Exact,
    pub b_high: Exact,
    pub sample_b: String,
    pub dimension: Signature,
    /// Type on each piece of the interval, filled in by spherical classification.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<(BRegion, RepresentationType)>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Graphs admitted only at `λ = −1/2`, where `|a| = |b|`.
    pub boundary_graphs: Vec<(String, Branch)>,
    /// Quasi-representable graphs rejected by the final exact check.
    pub unverified: Vec<String>,
    /// Largest sets of a contributing cell rejected by their type.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<(String, RepresentationType)>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BucketSummary {
    pub branch: Branch,
    pub lambda: Exact,
    pub levels: Vec<LevelSize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunInfo {
    pub elapsed_seconds: f64,
    pub workers: usize,
}

/// Result of classifying a cell, serialized with `"schema": 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema: u32,
    pub kind: String,
    pub p: usize,
    pub q: usize,
    pub max_order: usize,
    pub infinite: bool,
    /// Number of `(graph, branch, λ)` configurations of the largest order.
    pub count: usize,
    pub distinct_graphs: usize,
    pub cell: String,
    pub truncated: bool,
    pub configurations: Vec<Configuration>,
    pub families: Vec<Family>,
    pub buckets: Vec<BucketSummary>,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
}

impl ClassificationReport {
    pub(crate) fn finish_counts(&mut self) {
        let graphs: BTreeSet<&str> = self
            .configurations
            .iter()
            .map(|c| c.graph6.as_str())
            .chain(self.families.iter().map(|f| f.graph6.as_str()))
            .collect();
        self.distinct_graphs = graphs.len();
        self.count = self.configurations.len();
        self.cell = if self.infinite {
            format!("{}_∞", self.max_order)
        } else {
            format!("{}_{}", self.max_order, self.count)
        };
    }

    /// JSON without the run-time section, for byte comparisons.
    pub fn to_json_deterministic(&self) -> String {
        let mut c = self.clone();
        c.run = None;
        serde_json::to_string_pretty(&c).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// DOT rendering of the reported graphs.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.configurations.iter().enumerate() {
            out.push_str(&c.graph().to_dot(&format!("p{}_q{}_{}", self.p, self.q, i)));
        }
        for (i, f) in self.families.iter().enumerate() {
            let g = graph6_decode(&f.graph6).expect("valid graph6");
            out.push_str(&g.to_dot(&format!("p{}_q{}_family_{}", self.p, self.q, i)));
        }
        out
    }
}

/// Proper members with their keys, and graph6 strings of rejected candidates.
pub type Verified = (Vec<(Graph, LambdaKey)>, Vec<String>);

/// Verified proper members of a cell at order `n`, with rejected ones.
pub fn verified_at(run: &CellRun, n: usize) -> Result<Verified, SearchError> {
    let items: Vec<(Graph, &LambdaKey)> = run
        .buckets
        .iter()
        .flat_map(|b| {
            b.lprime
                .iter()
                .filter(|(m, _)| *m == n)
                .flat_map(move |(_, gs)| gs.iter().map(move |g| (*g, &b.key)))
        })
        .collect();
    let checked: Vec<Result<(Graph, &LambdaKey, bool), SearchError>> = items
        .par_iter()
        .map(|(g, k)| {
            verify_representable(g, k, run.p, run.q).map(|v| (*g, *k, v.representable && v.proper))
        })
        .collect();
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for r in checked {
        let (g, k, good) = r?;
        if good {
            ok.push((g, k.clone()));
        } else {
            bad.push(format!("{} at {}", graph6_encode(&g), describe(k)));
        }
    }
    Ok((ok, bad))
}

/// Orders with a nonempty `L'`, largest first.
pub fn lprime_orders(run: &CellRun) -> Vec<usize> {
    let set: BTreeSet<usize> = run
        .buckets
        .iter()
        .flat_map(|b| {
            b.lprime
                .iter()
                .filter(|(_, g)| !g.is_empty())
                .map(|(n, _)| *n)
        })
        .collect();
    set.into_iter().rev().collect()
}

pub(crate) fn configurations_from_points(
    hits: &[ScanHit],
) -> Result<Vec<Configuration>, SearchError> {
    hits.par_iter()
        .filter_map(|h| match &h.region {
            BRegion::Point { lambda, .. } => {
                Some(Configuration::from_graph(&h.graph, h.branch, lambda))
            }
            BRegion::Interval { .. } => None,
        })
        .collect()
}

pub(crate) fn families_from_intervals(hits: &[ScanHit], dimension: Signature) -> Vec<Family> {
    hits.iter()
        .filter_map(|h| match &h.region {
            BRegion::Interval { lo, hi, sample } => Some(Family {
                order: h.graph.order(),
                graph6: graph6_encode(&h.graph),
                branch: h.branch,
                b_low: Exact::new(lo),
                b_high: Exact::new(hi),
                sample_b: sample.clone(),
                dimension,
                pieces: Vec::new(),
            }),
            BRegion::Point { .. } => None,
        })
        .collect()
}

/// Builds the report of a searched cell, falling back to small-order scans.
pub fn report_from_run(run: &CellRun) -> Result<ClassificationReport, SearchError> {
    let (p, q) = (run.p, run.q);
    let mut diagnostics = Diagnostics {
        boundary_graphs: run
            .boundary
            .iter()
            .map(|(g, b)| (graph6_encode(g), *b))
            .collect(),
        ..Default::default()
    };
    let mut configurations = Vec::new();
    let mut families = Vec::new();
    let mut max_order = 0;
    let mut infinite = false;
    for n in lprime_orders(run) {
        let (ok, bad) = verified_at(run, n)?;
        diagnostics.unverified.extend(bad);
        if !ok.is_empty() {
            max_order = n;
            configurations = ok
                .par_iter()
                .map(|(g, k)| Configuration::from_graph(g, k.branch, &k.root))
                .collect::<Result<Vec<_>, _>>()?;
            break;
        }
    }
    if configurations.is_empty() {
        let n = p + q + 2;
        let hits = scan_small_orders(p, q, n, &run.branches);
        configurations = configurations_from_points(&hits)?;
        if !configurations.is_empty() {
            max_order = n;
        } else if p + q + 1 >= 3 {
            let hits = scan_small_orders(p, q, p + q + 1, &run.branches);
            families = families_from_intervals(&hits, Signature::new(p, q));
            if !families.is_empty() {
                max_order = p + q + 1;
                infinite = true;
            }
        }
        diagnostics
            .notes
            .push(format!("no proper set of order {} or more", p + q + 3));
        if max_order != p + q + 2 {
            diagnostics
                .notes
                .push(format!("no proper set of order {}", p + q + 2));
        }
    }
    sort_configurations(&mut configurations);
    let buckets = run
        .buckets
        .iter()
        .filter(|b| b.sizes.first().is_some_and(|s| s.lprime > 0))
        .map(|b| BucketSummary {
            branch: b.key.branch,
            lambda: Exact::new(&b.key.root),
            levels: b.sizes.clone(),
        })
        .collect();
    let mut report = ClassificationReport {
        schema: 1,
        kind: "classify".into(),
        p,
        q,
        max_order,
        infinite,
        count: 0,
        distinct_graphs: 0,
        cell: String::new(),
        truncated: run.truncated,
        configurations,
        families,
        buckets,
        diagnostics,
        run: None,
    };
    report.finish_counts();
    Ok(report)
}

/// Largest proper two-distance sets with embedding dimension exactly `(p, q)`.
pub fn classify(
    p: usize,
    q: usize,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, SearchError> {
    let start = Instant::now();
    let run = run_cell(p, q, opts)?;
    let mut report = report_from_run(&run)?;
    report.run = Some(RunInfo {
        elapsed_seconds: start.elapsed().as_secs_f64(),
        workers: rayon::current_num_threads(),
    });
    Ok(report)
}
