#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use pqdist::arith::{alg_compare, isolate_roots, AlgebraicNumber, IntPoly};
use pqdist::search::classify::report_from_run;
use pqdist::search::{run_cell, CellRun, ClassificationReport, ClassifyOptions, SearchError};
use pqdist::spherical::classify_spherical_with;

fn cache() -> &'static Mutex<HashMap<(usize, usize), CellRun>> {
    static RUNS: OnceLock<Mutex<HashMap<(usize, usize), CellRun>>> = OnceLock::new();
    RUNS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Search data of a cell, computed once per test binary.
pub fn run(p: usize, q: usize) -> Result<CellRun, SearchError> {
    if let Some(r) = cache().lock().unwrap().get(&(p, q)) {
        return Ok(r.clone());
    }
    let r = run_cell(p, q, &ClassifyOptions::default())?;
    cache().lock().unwrap().insert((p, q), r.clone());
    Ok(r)
}

pub fn largest(p: usize, q: usize) -> ClassificationReport {
    report_from_run(&run(p, q).unwrap()).unwrap()
}

pub fn spherical(p: usize, q: usize) -> ClassificationReport {
    classify_spherical_with(p, q, &mut |a, b| run(a, b)).unwrap()
}

/// `k`-th smallest real root of the polynomial with integer coefficients `c` (low degree first).
pub fn root(c: &[i64], k: usize) -> AlgebraicNumber {
    isolate_roots(&IntPoly::from_i64s(c))[k].clone()
}

/// The eight distance parameters of the largest sets in `ℝ^{2,1}`: `1/5` and the
/// second-smallest roots of seven polynomials, scaled to integer coefficients.
pub fn lambdas_2_1() -> Vec<AlgebraicNumber> {
    let mut out = vec![root(&[-1, 5], 0)];
    for c in [
        &[-1, 1, 5][..],
        &[1, -5, 3, 5],
        &[-1, 5, 5],
        &[-1, 8, 5],
        &[-4, -8, 5, 5],
        &[-3, -5, 7, 5],
        &[3, 9, 5],
    ] {
        out.push(root(c, 1));
    }
    out
}

/// Whether `found` and `expected` match one-to-one under exact equality.
pub fn bijective(found: &[AlgebraicNumber], expected: &[AlgebraicNumber]) -> bool {
    if found.len() != expected.len() {
        return false;
    }
    let mut used = vec![false; expected.len()];
    for x in found {
        let Some(i) = (0..expected.len())
            .find(|&i| !used[i] && alg_compare(x, &expected[i]) == Ordering::Equal)
        else {
            return false;
        };
        used[i] = true;
    }
    true
}
