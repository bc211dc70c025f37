//! Table verification.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};

use pqdist::search::classify::{report_from_run, Progress};
use pqdist::search::tables::{cells_up_to, ExpectedCell, Tier, LARGEST, LARGEST_SPHERICAL};
use pqdist::search::{run_cell, CellRun, ClassifyOptions, SearchError};
use pqdist::spherical::{classify_spherical_with, spherical_sources};

use crate::{guard, Failure, Outcome};

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum TableChoice {
    #[value(name = "1")]
    Largest,
    #[value(name = "2")]
    Spherical,
    Both,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "small")]
    tier: Tier,
    #[arg(long, value_enum, default_value_t = TableChoice::Both)]
    table: TableChoice,
    /// Permit cells whose base order is 10.
    #[arg(long)]
    allow_long: bool,
    #[arg(long, env = "PQDIST_CHECKPOINT_DIR")]
    checkpoint_dir: Option<PathBuf>,
    #[arg(long, requires = "checkpoint_dir")]
    resume: bool,
}

fn cells_needed(t1: &[ExpectedCell], t2: &[ExpectedCell]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = t1.iter().map(|c| (c.p, c.q)).collect();
    for c in t2 {
        for s in spherical_sources(c.p, c.q) {
            out.push((s.p.max(s.q), s.p.min(s.q)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn cmd_verify_tables(a: &VerifyArgs, progress: Option<Progress>) -> Outcome {
    let t1 = if a.table != TableChoice::Spherical {
        cells_up_to(LARGEST, a.tier)
    } else {
        Vec::new()
    };
    let t2 = if a.table != TableChoice::Largest {
        cells_up_to(LARGEST_SPHERICAL, a.tier)
    } else {
        Vec::new()
    };
    let needed = cells_needed(&t1, &t2);
    guard(1, 0, &needed, a.allow_long)?;
    let opts = ClassifyOptions {
        max_order: None,
        checkpoint_dir: a.checkpoint_dir.clone(),
        resume: a.resume,
        progress,
    };
    let mut runs: BTreeMap<(usize, usize), CellRun> = BTreeMap::new();
    let mut get = |p: usize, q: usize| -> Result<CellRun, SearchError> {
        if let Some(r) = runs.get(&(p, q)) {
            return Ok(r.clone());
        }
        let r = run_cell(p, q, &opts)?;
        runs.insert((p, q), r.clone());
        Ok(r)
    };
    let mut failures = Vec::new();
    let start = Instant::now();
    for (name, cells) in [("table 1", &t1), ("table 2", &t2)] {
        for c in cells.iter() {
            let t = Instant::now();
            let report = if name == "table 1" {
                report_from_run(&get(c.p, c.q)?)?
            } else {
                classify_spherical_with(c.p, c.q, &mut get)?
            };
            let ok = report.cell == c.label();
            println!(
                "{name} ({}, {}): expected {:<6} got {:<6} {}  [{:.1}s]",
                c.p,
                c.q,
                c.label(),
                report.cell,
                if ok { "PASS" } else { "FAIL" },
                t.elapsed().as_secs_f64()
            );
            if !ok {
                failures.push(format!("{name} ({}, {})", c.p, c.q));
            }
        }
    }
    println!(
        "{} cells checked in {:.1}s",
        t1.len() + t2.len(),
        start.elapsed().as_secs_f64()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "mismatch in {}",
            failures.join(", ")
        )))
    }
}
