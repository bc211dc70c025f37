//! Largest proper spherical two-distance sets, assembled from the level data of three cells.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::region_types;
use crate::embedding::{scan_small_orders, BRegion, RepresentationType, ScanHit};
use crate::graph::{graph6_decode, Graph};
use crate::search::classify::{
    configurations_from_points, families_from_intervals, lprime_orders, sort_configurations,
    verified_at, BucketSummary, Diagnostics, Exact, Family, RunInfo,
};
use crate::search::{
    run_cell, CellRun, ClassificationReport, ClassifyOptions, Configuration, SearchError,
};
use crate::spectral::Signature;

/// A cell contributing to a sphere, with the types it may have there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalSource {
    pub p: usize,
    pub q: usize,
    pub types: Vec<u8>,
}

/// Type of `−D` from the type of `D`.
pub fn negated_type(t: RepresentationType) -> RepresentationType {
    match t.0 {
        2 => RepresentationType(3),
        3 => RepresentationType(2),
        x => RepresentationType(x),
    }
}

/// Cells whose sets lie on `S_{p,q}` and nowhere smaller: type 2 in `(p, q)`, types 3 and 4
/// in `(p−1, q)`, type 1 in `(p−1, q−1)`.
pub fn spherical_sources(p: usize, q: usize) -> Vec<SphericalSource> {
    let mut out = vec![SphericalSource {
        p,
        q,
        types: vec![2],
    }];
    if p >= 1 && p - 1 + q >= 1 {
        out.push(SphericalSource {
            p: p - 1,
            q,
            types: vec![3, 4],
        });
    }
    if p >= 1 && q >= 1 && p + q >= 3 {
        out.push(SphericalSource {
            p: p - 1,
            q: q - 1,
            types: vec![1],
        });
    }
    out
}

/// Picks `D` or `−D` so that the type is admissible in `src`.
///
/// Sets of `(k, l)` with `k < l` are the negations of sets of `(l, k)`, and both signs of a
/// `(k, k)` set are available.
fn admit(
    c: &Configuration,
    src: &SphericalSource,
    negated_cell: bool,
) -> Result<Option<Configuration>, SearchError> {
    let ok = |t: RepresentationType| src.types.contains(&t.0);
    let own = c.representation_type;
    let neg = negated_type(own);
    let g = c.graph();
    let flip = || Configuration::from_graph(&g, c.branch.flip(), &c.lambda.value);
    if negated_cell {
        return if ok(neg) { flip().map(Some) } else { Ok(None) };
    }
    if ok(own) {
        return Ok(Some(c.clone()));
    }
    if src.p == src.q && ok(neg) {
        return flip().map(Some);
    }
    Ok(None)
}

struct Contribution {
    order: usize,
    configurations: Vec<Configuration>,
    families: Vec<Family>,
    excluded: Vec<(String, RepresentationType)>,
}

fn admit_all(
    configs: &[Configuration],
    src: &SphericalSource,
    negated_cell: bool,
) -> Result<(Vec<Configuration>, Vec<(String, RepresentationType)>), SearchError> {
    let checked: Vec<Result<(Option<Configuration>, &Configuration), SearchError>> = configs
        .par_iter()
        .map(|c| admit(c, src, negated_cell).map(|a| (a, c)))
        .collect();
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for r in checked {
        match r? {
            (Some(a), _) => ok.push(a),
            (None, c) => bad.push((c.graph6.clone(), c.representation_type)),
        }
    }
    Ok((ok, bad))
}

/// Admissible pieces of interval families, split into open pieces and single distances.
fn admit_families(
    families: &[Family],
    src: &SphericalSource,
    negated_cell: bool,
) -> Result<(Vec<Family>, Vec<Configuration>), SearchError> {
    let mut open = Vec::new();
    let mut points = Vec::new();
    for f in families {
        let g: Graph = graph6_decode(&f.graph6)?;
        let pieces = region_types(&g, f.branch, &f.b_low.value, &f.b_high.value)?;
        let mut kept = Vec::new();
        for (region, t) in pieces {
            let usable = if negated_cell {
                src.types.contains(&negated_type(t).0)
            } else {
                src.types.contains(&t.0)
                    || (src.p == src.q && src.types.contains(&negated_type(t).0))
            };
            if !usable {
                continue;
            }
            match &region {
                BRegion::Interval { .. } => kept.push((region, t)),
                BRegion::Point { lambda, .. } => {
                    let c = Configuration::from_graph(&g, f.branch, lambda)?;
                    if let Some(a) = admit(&c, src, negated_cell)? {
                        points.push(a);
                    }
                }
            }
        }
        if !kept.is_empty() {
            let mut fam = f.clone();
            fam.pieces = kept;
            if negated_cell {
                fam.branch = fam.branch.flip();
                let (lo, hi) = (fam.b_high.value.neg(), fam.b_low.value.neg());
                fam.b_low = Exact::new(&lo);
                fam.b_high = Exact::new(&hi);
                fam.dimension = fam.dimension.swap();
                fam.pieces = fam
                    .pieces
                    .into_iter()
                    .map(|(r, t)| (negate_region(r), negated_type(t)))
                    .collect();
                fam.sample_b = match crate::arith::rational::parse_rational(&fam.sample_b) {
                    Ok(x) => crate::arith::rational::format_rational(&-x),
                    Err(_) => fam.sample_b,
                };
            }
            open.push(fam);
        }
    }
    Ok((open, points))
}

fn negate_region(r: BRegion) -> BRegion {
    match r {
        BRegion::Point { lambda, b } => BRegion::Point { lambda, b: b.neg() },
        BRegion::Interval { lo, hi, sample } => BRegion::Interval {
            lo: hi.neg(),
            hi: lo.neg(),
            sample: match crate::arith::rational::parse_rational(&sample) {
                Ok(x) => crate::arith::rational::format_rational(&-x),
                Err(_) => sample,
            },
        },
    }
}

/// Largest order of `run`'s cell carrying an admissible set, descending through the levels
/// and then the two small-order scans.
fn contribution(
    run: &CellRun,
    src: &SphericalSource,
    negated_cell: bool,
) -> Result<Option<Contribution>, SearchError> {
    let (p, q) = (run.p, run.q);
    let mut excluded = Vec::new();
    let mut first = true;
    let mut note_excluded = |bad: Vec<(String, RepresentationType)>, first: &mut bool| {
        if *first && !bad.is_empty() {
            excluded = bad;
            *first = false;
        }
    };
    for n in lprime_orders(run) {
        let (ok, _) = verified_at(run, n)?;
        if ok.is_empty() {
            continue;
        }
        let configs: Vec<Configuration> = ok
            .par_iter()
            .map(|(g, k)| Configuration::from_graph(g, k.branch, &k.root))
            .collect::<Result<_, _>>()?;
        let (good, bad) = admit_all(&configs, src, negated_cell)?;
        note_excluded(bad, &mut first);
        if !good.is_empty() {
            return Ok(Some(Contribution {
                order: n,
                configurations: good,
                families: Vec::new(),
                excluded,
            }));
        }
    }
    let n = p + q + 2;
    if n >= 3 {
        let hits: Vec<ScanHit> = scan_small_orders(p, q, n, &run.branches);
        let configs = configurations_from_points(&hits)?;
        let (good, bad) = admit_all(&configs, src, negated_cell)?;
        note_excluded(bad, &mut first);
        if !good.is_empty() {
            return Ok(Some(Contribution {
                order: n,
                configurations: good,
                families: Vec::new(),
                excluded,
            }));
        }
    }
    let n = p + q + 1;
    if n >= 3 {
        let hits = scan_small_orders(p, q, n, &run.branches);
        let families = families_from_intervals(&hits, Signature::new(p, q));
        let (open, points) = admit_families(&families, src, negated_cell)?;
        if !open.is_empty() || !points.is_empty() {
            return Ok(Some(Contribution {
                order: n,
                configurations: points,
                families: open,
                excluded,
            }));
        }
    }
    Ok(None)
}

/// Largest proper spherical sets for `(p, q)` with `p ≥ q`, reading cell data from `get`.
pub fn classify_spherical_with(
    p: usize,
    q: usize,
    get: &mut dyn FnMut(usize, usize) -> Result<CellRun, SearchError>,
) -> Result<ClassificationReport, SearchError> {
    let mut best: Vec<(SphericalSource, Contribution)> = Vec::new();
    let mut diagnostics = Diagnostics::default();
    let mut buckets: Vec<BucketSummary> = Vec::new();
    for src in spherical_sources(p, q) {
        let negated_cell = src.p < src.q;
        let (cp, cq) = if negated_cell {
            (src.q, src.p)
        } else {
            (src.p, src.q)
        };
        let run = get(cp, cq)?;
        let Some(c) = contribution(&run, &src, negated_cell)? else {
            diagnostics.notes.push(format!(
                "no admissible set from ({}, {}) of types {:?}",
                src.p, src.q, src.types
            ));
            continue;
        };
        diagnostics.notes.push(format!(
            "({}, {}) types {:?}: order {}, {} sets, {} families",
            src.p,
            src.q,
            src.types,
            c.order,
            c.configurations.len(),
            c.families.len()
        ));
        if (src.p, src.q) == (p, q) {
            diagnostics.excluded = c.excluded.clone();
            buckets = crate::search::classify::report_from_run(&run)?.buckets;
        }
        best.push((src, c));
    }
    let max_order = best.iter().map(|(_, c)| c.order).max().unwrap_or(0);
    let mut configurations = Vec::new();
    let mut families = Vec::new();
    for (_, c) in best.into_iter().filter(|(_, c)| c.order == max_order) {
        configurations.extend(c.configurations);
        families.extend(c.families);
    }
    sort_configurations(&mut configurations);
    let mut report = ClassificationReport {
        schema: 1,
        kind: "spherical".into(),
        p,
        q,
        max_order,
        infinite: !families.is_empty(),
        count: 0,
        distinct_graphs: 0,
        cell: String::new(),
        truncated: false,
        configurations,
        families,
        buckets,
        diagnostics,
        run: None,
    };
    report.finish_counts();
    Ok(report)
}

/// Largest proper spherical two-distance sets in `ℝ^{p,q}`.
pub fn classify_spherical(
    p: usize,
    q: usize,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, SearchError> {
    let start = Instant::now();
    let mut truncated = false;
    let mut get = |a: usize, b: usize| {
        let r = run_cell(a, b, opts)?;
        truncated |= r.truncated;
        Ok(r)
    };
    let mut report = classify_spherical_with(p, q, &mut get)?;
    report.truncated = truncated;
    report.run = Some(RunInfo {
        elapsed_seconds: start.elapsed().as_secs_f64(),
        workers: rayon::current_num_threads(),
    });
    Ok(report)
}
