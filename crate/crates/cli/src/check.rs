//! Single-graph analysis.

use serde::Serialize;

use pqdist::embedding::{
    dimension_profile, BRegion, Branch, DissimilarityMatrix, RelationSpectrum,
};
use pqdist::search::classify::Exact;
use pqdist::search::{lemma42_candidates, Configuration, SearchError};
use pqdist::spectral::Signature;
use pqdist::spherical::minimal_spherical_dimension;

use crate::{emit, parse_graph, BranchChoice, Failure, Outcome};

#[derive(Serialize)]
struct CandidateReport {
    factor: String,
    lambda: Exact,
    b: Exact,
    dimension: Signature,
    proper: bool,
    representation_type: u8,
    negated_type: u8,
    spherical: bool,
    radius: Option<Exact>,
    minimal_sphere: Option<Signature>,
}

#[derive(Serialize)]
struct RegionReport {
    region: BRegion,
    dimension: Signature,
    proper: bool,
}

#[derive(Serialize)]
struct BranchReport {
    branch: Branch,
    candidates: Vec<CandidateReport>,
    /// Admitted only at `λ = −1/2`, where `|a| = |b|`.
    boundary: bool,
    intervals: Vec<RegionReport>,
}

#[derive(Serialize)]
struct GraphReport {
    graph6: String,
    order: usize,
    edges: usize,
    p: usize,
    q: usize,
    degenerate: bool,
    branches: Vec<BranchReport>,
}

fn analyse_branch(
    g: &pqdist::graph::Graph,
    p: usize,
    q: usize,
    branch: Branch,
) -> Result<BranchReport, Failure> {
    let target = Signature::new(p, q);
    let fits = |s: &Signature| s.positives <= p && s.negatives <= q;
    let cands = lemma42_candidates(g, p, q, branch)?;
    let mut candidates = Vec::new();
    for c in cands.admissible {
        let conf = Configuration::from_graph(g, branch, &c.root)?;
        let d = DissimilarityMatrix::relation(*g, branch, conf.b.value.clone())
            .map_err(|e| Failure::Input(e.to_string()))?;
        let sphere = minimal_spherical_dimension(&d).ok().map(|s| s.target);
        candidates.push(CandidateReport {
            factor: c.factor.to_string(),
            lambda: conf.lambda,
            b: conf.b,
            dimension: conf.dimension,
            proper: conf.dimension == target,
            representation_type: conf.representation_type.0,
            negated_type: conf.negated_type.0,
            spherical: conf.spherical,
            radius: conf.radius,
            minimal_sphere: sphere,
        });
    }
    let intervals = dimension_profile(&RelationSpectrum::of_graph(g), branch)
        .into_iter()
        .filter(|(r, s)| !r.is_point() && fits(s))
        .map(|(region, dimension)| RegionReport {
            region,
            proper: dimension == target,
            dimension,
        })
        .collect();
    Ok(BranchReport {
        branch,
        candidates,
        boundary: cands.boundary,
        intervals,
    })
}

fn exact_text(e: &Exact) -> String {
    match &e.closed_form {
        Some(c) => format!("{c} ≈ {}", e.decimal),
        None => format!("≈ {}", e.decimal),
    }
}

fn region_text(r: &BRegion) -> String {
    match r {
        BRegion::Interval { lo, hi, sample } => {
            let f = |x: &pqdist::arith::AlgebraicNumber| {
                x.closed_form().unwrap_or_else(|| x.to_decimal(10))
            };
            format!("b ∈ ({}, {}), e.g. b = {sample}", f(lo), f(hi))
        }
        BRegion::Point { b, .. } => format!(
            "b = {}",
            b.closed_form().unwrap_or_else(|| b.to_decimal(10))
        ),
    }
}

fn text(r: &GraphReport) -> String {
    let mut out = format!(
        "graph {} (order {}, {} edges) in R^{{{},{}}}\n",
        r.graph6, r.order, r.edges, r.p, r.q
    );
    if r.degenerate {
        out.push_str("degenerate: single relation\n");
        return out;
    }
    for b in &r.branches {
        out.push_str(&format!("branch {}:\n", b.branch));
        if b.candidates.is_empty() && b.intervals.is_empty() {
            out.push_str("  not representable\n");
        }
        for c in &b.candidates {
            out.push_str(&format!(
                "  λ root of {}: {}\n",
                c.factor,
                exact_text(&c.lambda)
            ));
            out.push_str(&format!("    b = {}\n", exact_text(&c.b)));
            out.push_str(&format!(
                "    embedding dimension {}{}, type {}, −D type {}\n",
                c.dimension,
                if c.proper { " proper" } else { "" },
                c.representation_type,
                c.negated_type
            ));
            match (&c.radius, c.spherical) {
                (Some(r), true) => out.push_str(&format!(
                    "    spherical, squared radius r = {}\n",
                    exact_text(r)
                )),
                _ => out.push_str("    not spherical in its embedding dimension\n"),
            }
            if let Some(s) = &c.minimal_sphere {
                out.push_str(&format!(
                    "    smallest sphere S_{{{},{}}}\n",
                    s.positives, s.negatives
                ));
            }
        }
        for i in &b.intervals {
            out.push_str(&format!(
                "  {}: embedding dimension {}{}\n",
                region_text(&i.region),
                i.dimension,
                if i.proper { " proper" } else { "" }
            ));
        }
        if b.boundary {
            out.push_str("  also admitted at |a| = |b| (λ = −1/2), outside the searched range\n");
        }
    }
    out
}

pub fn cmd_check_graph(g6: &str, p: usize, q: usize, choice: BranchChoice, json: bool) -> Outcome {
    let g = parse_graph(g6)?;
    let mut report = GraphReport {
        graph6: pqdist::graph::graph6_encode(&g),
        order: g.order(),
        edges: g.edge_count(),
        p,
        q,
        degenerate: false,
        branches: Vec::new(),
    };
    let branches: &[Branch] = match choice {
        BranchChoice::Plus => &[Branch::Plus],
        BranchChoice::Minus => &[Branch::Minus],
        BranchChoice::Both => &[Branch::Plus, Branch::Minus],
    };
    for &b in branches {
        match analyse_branch(&g, p, q, b) {
            Ok(r) => report.branches.push(r),
            Err(Failure::Input(m)) if m == SearchError::Degenerate.to_string() => {
                report.degenerate = true;
                report.branches.clear();
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if json {
        emit(
            None,
            &serde_json::to_string_pretty(&report).expect("serializable"),
        )
    } else {
        emit(None, &text(&report))
    }
}
