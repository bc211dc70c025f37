//! Level-by-level classification of largest proper two-distance sets.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::arith::{alg_compare, isolate_roots, AlgebraicNumber, ArithError, IntPoly, Rational};
use crate::embedding::{jperp_polynomial, Branch, EmbeddingError};
use crate::graph::{Graph, GraphError};
use crate::spectral::Signature;

pub mod checkpoint;
pub mod classify;
pub mod level;
pub mod tables;

pub use checkpoint::{checkpoint_load, checkpoint_load_level, checkpoint_save, CheckpointManifest};
pub use classify::{
    cell_checkpoint_exists, checkpointed_cells, classify, clear_cell, inspect_cell, run_cell,
    CellCheckpoint, CellRun, ClassificationReport, ClassifyOptions, Configuration,
};
pub use level::{
    build_base_level, build_base_levels, extend_level, verify_representable, BaseLevels,
    SearchLevel, Verification,
};

/// Largest base order the search accepts.
pub const MAX_BASE_ORDER: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("degenerate: single relation (graph is complete or edgeless)")]
    Degenerate,
    #[error("cell ({p}, {q}) needs base order {order} > {max}", max = MAX_BASE_ORDER)]
    TierExceeded { p: usize, q: usize, order: usize },
    #[error("corrupt checkpoint {file}, record {record}: {reason}")]
    CorruptCheckpoint {
        file: String,
        record: usize,
        reason: String,
    },
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// An eigenvalue `λ` of `PA1P` on `j⊥` together with the branch it was found on.
///
/// `factor` is a primitive square-free polynomial with positive leading coefficient
/// and `root` is isolated as a root of `factor`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaKey {
    pub branch: Branch,
    pub factor: IntPoly,
    pub root: AlgebraicNumber,
}

impl LambdaKey {
    pub fn new(
        branch: Branch,
        factor: IntPoly,
        root: AlgebraicNumber,
    ) -> Result<Self, SearchError> {
        let key = LambdaKey {
            branch,
            factor,
            root,
        };
        key.validate()?;
        Ok(key)
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| {
            Err(SearchError::CheckpointMismatch(format!(
                "invalid λ key: {m}"
            )))
        };
        if !self.factor.is_squarefree() || self.factor.degree() == 0 {
            return bad("factor is not square-free");
        }
        if alg_sign_of(&self.factor, &self.root) != Ordering::Equal {
            return bad("root does not annihilate the factor");
        }
        if self.root.sign() == Ordering::Equal
            || alg_compare(&self.root, &minus_half()) != Ordering::Greater
        {
            return bad("λ must be nonzero and exceed -1/2");
        }
        Ok(())
    }

    /// The non-edge distance `b` paired with edge distance `a = ±1`.
    pub fn b(&self) -> AlgebraicNumber {
        self.branch.distance(&self.root).expect("λ > −1/2")
    }

    pub fn same_lambda(&self, other: &LambdaKey) -> bool {
        self.branch == other.branch && alg_compare(&self.root, &other.root) == Ordering::Equal
    }
}

impl PartialEq for LambdaKey {
    fn eq(&self, other: &Self) -> bool {
        self.same_lambda(other) && self.factor == other.factor
    }
}

fn alg_sign_of(p: &IntPoly, x: &AlgebraicNumber) -> Ordering {
    crate::arith::alg_sign(p, x)
}

pub(crate) fn minus_half() -> AlgebraicNumber {
    AlgebraicNumber::from_rational(Rational::new((-1).into(), 2.into()))
}

/// One admissible `λ` for a graph of order `p + q + 3`.
#[derive(Clone, Debug)]
pub struct Candidate {
    /// Square-free factor of the `j⊥` polynomial carrying `root`.
    pub factor: IntPoly,
    /// Position of `root` among the real roots of `factor`.
    pub index: usize,
    pub root: AlgebraicNumber,
    /// Embedding dimension of `a·A1 + b·A2` at the matching `b`.
    pub dimension: Signature,
}

/// Admissible distances of one graph on one branch.
#[derive(Clone, Debug, Default)]
pub struct Candidates {
    pub admissible: Vec<Candidate>,
    /// Set when `λ = −1/2` would pass, i.e. `b = ∓1` with `|a| = |b|`.
    pub boundary: bool,
}

/// Eigenvalues `λ ≠ 0`, `λ > −1/2` of `PA1P` on `j⊥` whose distance `b` embeds the graph
/// in a cell componentwise at most `(p, q)`.
pub fn lemma42_candidates(
    g: &Graph,
    p: usize,
    q: usize,
    branch: Branch,
) -> Result<Candidates, SearchError> {
    if g.is_complete() || g.is_edgeless() {
        return Err(SearchError::Degenerate);
    }
    let n = g.order();
    let poly = jperp_polynomial(&g.adjacency());
    let need = (n - 1).saturating_sub(p + q).max(1);
    if need >= 2 && !may_have_root_of_multiplicity(&poly, need) {
        return Ok(Candidates::default());
    }
    let factors = poly.squarefree_decompose();
    if factors.iter().all(|(_, m)| *m < need) {
        return Ok(Candidates::default());
    }
    let mut roots: Vec<(usize, usize, AlgebraicNumber, usize)> = Vec::new();
    for (fi, (f, m)) in factors.iter().enumerate() {
        for (ri, r) in isolate_roots(f).into_iter().enumerate() {
            roots.push((fi, ri, r, *m));
        }
    }
    roots.sort_by(|x, y| alg_compare(&x.2, &y.2));
    let total: usize = roots.iter().map(|r| r.3).sum();
    let half = minus_half();
    let mut out = Candidates::default();
    let mut below = 0;
    for (fi, ri, r, m) in roots {
        let above = total - below - m;
        if m >= need && r.sign() != Ordering::Equal {
            let dim = branch.orient(below, above);
            if dim.positives <= p && dim.negatives <= q {
                match alg_compare(&r, &half) {
                    Ordering::Greater => {
                        let factor = normalize(&factors[fi].0);
                        out.admissible.push(Candidate {
                            factor,
                            index: ri,
                            root: r,
                            dimension: dim,
                        });
                    }
                    Ordering::Equal => out.boundary = true,
                    Ordering::Less => {}
                }
            }
        }
        below += m;
    }
    Ok(out)
}

const FILTER_PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 − 1

/// Cheap necessary condition for a root of multiplicity at least `need`.
///
/// Such a root contributes `need − 1` to the degree of `gcd(f, f′)`, and reduction modulo a
/// prime not dividing the leading coefficient can only raise that degree. Returns `true`
/// whenever the test is inconclusive.
fn may_have_root_of_multiplicity(f: &IntPoly, need: usize) -> bool {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let modulus = BigInt::from(FILTER_PRIME);
    let reduce = |c: &BigInt| c.mod_floor(&modulus).to_u64().expect("reduced below 2^61");
    let fm: Vec<u64> = f.coeffs().iter().map(reduce).collect();
    if fm.last().is_none_or(|&c| c == 0) {
        return true;
    }
    let dm: Vec<u64> = f.derivative().coeffs().iter().map(reduce).collect();
    gcd_mod_degree(fm, dm) + 1 >= need
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % FILTER_PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, FILTER_PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn trim_mod(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of `gcd(a, b)` over `GF(2^61 − 1)`; coefficients are lowest degree first.
fn gcd_mod_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = mul_mod(*a.last().expect("nonempty"), inv);
            for (i, &c) in b.iter().enumerate() {
                let t = mul_mod(factor, c);
                a[i + shift] = (a[i + shift] + FILTER_PRIME - t) % FILTER_PRIME;
            }
            trim_mod(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn normalize(f: &IntPoly) -> IntPoly {
    let f = f.primitive();
    if f.leading() < 0.into() {
        f.neg()
    } else {
        f
    }
}

/// Groups `(item, candidate)` pairs by equal `λ`, returning keys in increasing `λ`.
///
/// Each key's factor is the gcd of the factors seen in its group.
pub fn bucket_by_lambda<T>(
    branch: Branch,
    items: Vec<(T, Candidate)>,
) -> Vec<(LambdaKey, Vec<(T, Signature)>)> {
    let mut exact: FxHashMap<(IntPoly, usize), (AlgebraicNumber, Vec<(T, Signature)>)> =
        FxHashMap::default();
    for (t, c) in items {
        exact
            .entry((c.factor, c.index))
            .or_insert_with(|| (c.root, Vec::new()))
            .1
            .push((t, c.dimension));
    }
    let mut groups: Vec<(IntPoly, AlgebraicNumber, Vec<(T, Signature)>)> = exact
        .into_iter()
        .map(|((f, _), (r, v))| (f, r, v))
        .collect();
    groups.sort_by(|x, y| alg_compare(&x.1, &y.1).then_with(|| x.0.coeffs().cmp(y.0.coeffs())));
    let mut out: Vec<(LambdaKey, Vec<(T, Signature)>)> = Vec::new();
    let mut pending: Option<(IntPoly, AlgebraicNumber, Vec<(T, Signature)>)> = None;
    for (f, r, v) in groups {
        match pending.as_mut() {
            Some((pf, pr, pv)) if alg_compare(pr, &r) == Ordering::Equal => {
                *pf = normalize(&pf.gcd(&f));
                pv.extend(v);
            }
            _ => {
                if let Some(done) = pending.take() {
                    out.push(finish_bucket(branch, done));
                }
                pending = Some((f, r, v));
            }
        }
    }
    if let Some(done) = pending {
        out.push(finish_bucket(branch, done));
    }
    out
}

fn finish_bucket<T>(
    branch: Branch,
    (factor, root, items): (IntPoly, AlgebraicNumber, Vec<(T, Signature)>),
) -> (LambdaKey, Vec<(T, Signature)>) {
    let root = isolate_roots(&factor)
        .into_iter()
        .find(|x| alg_compare(x, &root) == Ordering::Equal)
        .expect("the gcd keeps the common root");
    (
        LambdaKey {
            branch,
            factor,
            root,
        },
        items,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn degenerate_graphs_are_rejected() {
        assert!(matches!(
            lemma42_candidates(&Graph::complete(5), 1, 1, Branch::Plus),
            Err(SearchError::Degenerate)
        ));
        assert!(matches!(
            lemma42_candidates(&Graph::empty(5), 1, 1, Branch::Plus),
            Err(SearchError::Degenerate)
        ));
    }

    #[test]
    fn multiplicity_filter_is_conservative() {
        // (x − 1)²(x + 2)(x − 3)
        let f = IntPoly::from_i64s(&[1, -1])
            .mul(&IntPoly::from_i64s(&[-1, 1]))
            .mul(&IntPoly::from_i64s(&[2, 1]))
            .mul(&IntPoly::from_i64s(&[-3, 1]));
        assert!(may_have_root_of_multiplicity(&f, 2));
        assert!(!may_have_root_of_multiplicity(&f, 3));
        assert!(!may_have_root_of_multiplicity(&IntPoly::from_i64s(&[-2, 0, 1]), 2));
        for g in crate::graph::generate_all(7) {
            let poly = jperp_polynomial(&g.adjacency());
            let top = poly.squarefree_decompose().iter().map(|(_, m)| *m).max();
            for need in 2..=4 {
                if top.is_some_and(|m| m >= need) {
                    assert!(may_have_root_of_multiplicity(&poly, need));
                }
            }
        }
    }

    #[test]
    fn heptagon_candidate() {
        let c7 = Graph::cycle(7);
        let cands = lemma42_candidates(&c7, 2, 2, Branch::Plus).unwrap();
        let target = IntPoly::from_i64s(&[-1, -2, 1, 1]);
        let hit = cands
            .admissible
            .iter()
            .find(|c| c.factor == target)
            .expect("cubic eigenvalue admissible");
        assert_eq!(hit.dimension, Signature::new(2, 2));
        let roots = isolate_roots(&target);
        assert_eq!(alg_compare(&hit.root, &roots[1]), Ordering::Equal);
    }

    #[test]
    fn buckets_merge_equal_roots_from_different_factors() {
        let r = AlgebraicNumber::from_rational(rat(1, 5));
        let f1 = IntPoly::from_i64s(&[-1, 5]);
        let f2 = IntPoly::from_i64s(&[-1, 5]).mul(&IntPoly::from_i64s(&[-2, 0, 1]));
        let roots2 = isolate_roots(&f2);
        let idx = roots2
            .iter()
            .position(|x| alg_compare(x, &r) == Ordering::Equal)
            .unwrap();
        let items = vec![
            (
                0,
                Candidate {
                    factor: f1.clone(),
                    index: 0,
                    root: r.clone(),
                    dimension: Signature::new(1, 1),
                },
            ),
            (
                1,
                Candidate {
                    factor: f2,
                    index: idx,
                    root: roots2[idx].clone(),
                    dimension: Signature::new(1, 1),
                },
            ),
        ];
        let buckets = bucket_by_lambda(Branch::Plus, items);
        assert_eq!(buckets.len(), 1);
        assert_eq!(buckets[0].0.factor, f1);
        assert_eq!(buckets[0].1.len(), 2);
        assert_eq!(buckets[0].0.b(), AlgebraicNumber::from_rational(rat(1, 6)));
    }
}
