//! Explicit point sets in `ℝ^{p,q}` and numeric realization of dissimilarity matrices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::arith::rational::format_rational;
use crate::arith::Rational;
use crate::embedding::{embedding_dimension, DissimilarityMatrix, EmbeddingError};
use crate::spectral::{Matrix, RatMatrix, Signature};

/// Working precision of [`realize`], in bits.
pub const REALIZE_PRECISION: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("realization deviates by {max_deviation:e} > tolerance {tolerance:e}")]
    ToleranceExceeded { max_deviation: f64, tolerance: f64 },
    #[error("division by a sum of radicals")]
    NonMonomialInverse,
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// `Σ c_k √k` over square-free `k ≥ 1` with rational `c_k`.
///
/// Square roots of distinct square-free integers are linearly independent over `ℚ`, so the
/// representation is canonical and equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radical {
    terms: BTreeMap<u64, Rational>,
}

/// `(f, m)` with `n = f²·m` and `m` square-free.
fn split_square(mut n: u64) -> (u64, u64) {
    let mut f = 1;
    let mut m = 1;
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        f *= d.pow(e / 2);
        if e % 2 == 1 {
            m *= d;
        }
        d += 1;
    }
    (f, m * n)
}

impl Radical {
    pub fn zero() -> Self {
        Radical::default()
    }

    pub fn rational(r: Rational) -> Self {
        Radical::term(r, 1)
    }

    pub fn int(n: i64) -> Self {
        Radical::rational(Rational::from_integer(n.into()))
    }

    /// `c·√k` for any `k ≥ 0`.
    pub fn term(c: Rational, k: u64) -> Self {
        let mut out = Radical::zero();
        if k == 0 || c.is_zero() {
            return out;
        }
        let (f, m) = split_square(k);
        out.terms.insert(m, c * Rational::from_integer(f.into()));
        out
    }

    pub fn sqrt(k: u64) -> Self {
        Radical::term(Rational::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// `(coefficient, radicand)` pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, u64)> {
        self.terms.iter().map(|(k, c)| (c, *k))
    }

    fn accumulate(&mut self, k: u64, c: Rational) {
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &Radical) -> Radical {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Radical {
        Radical {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Radical) -> Radical {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &Rational) -> Radical {
        if r.is_zero() {
            return Radical::zero();
        }
        Radical {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn mul(&self, o: &Radical) -> Radical {
        let mut out = Radical::zero();
        for (k, c) in &self.terms {
            for (m, d) in &o.terms {
                let g = k.gcd(m);
                let coeff = c * d * Rational::from_integer(g.into());
                out.accumulate((k / g) * (m / g), coeff);
            }
        }
        out
    }

    pub fn square(&self) -> Radical {
        self.mul(self)
    }

    /// Inverse of a single term `c√k`.
    pub fn inverse(&self) -> Result<Radical, ConstructionError> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((k, c)), None) => Ok(Radical::term(
                Rational::one() / (c * Rational::from_integer((*k).into())),
                1,
            )
            .mul(&Radical::sqrt(*k))),
            _ => Err(ConstructionError::NonMonomialInverse),
        }
    }

    pub fn to_bigfloat(&self, p: usize, cc: &mut Consts) -> BigFloat {
        let mut acc = BigFloat::from_word(0, p);
        for (k, c) in &self.terms {
            let root = BigFloat::from_u64(*k, p).sqrt(p, RM);
            acc = acc.add(&rational_to_bigfloat(c, p, cc).mul(&root, p, RM), p, RM);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| crate::arith::rational::to_f64(c) * (*k as f64).sqrt())
            .sum()
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if *k == 1 {
                    format_rational(c)
                } else {
                    format!("{}*sqrt({k})", format_rational(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn rational_to_bigfloat(r: &Rational, p: usize, cc: &mut Consts) -> BigFloat {
    let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, p, RM, cc);
    let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, p, RM, cc);
    n.div(&d, p, RM)
}

fn bigfloat_to_f64(x: &BigFloat, cc: &mut Consts) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.format(Radix::Dec, RM, cc)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(f64::NAN)
}

/// Hexadecimal rendering `±0x<mantissa digits>p<binary exponent>` of a binary float.
fn bigfloat_to_hex(x: &BigFloat) -> String {
    if x.is_zero() {
        return "0x0p+0".into();
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return "nan".into();
    };
    let mut digits = String::new();
    for w in words.iter().rev() {
        digits.push_str(&format!("{w:016x}"));
    }
    let trimmed = digits.trim_end_matches('0');
    let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
    let sign = if sign == astro_float::Sign::Neg {
        "-"
    } else {
        ""
    };
    format!("{sign}0x0.{trimmed}p{exp:+}")
}

/// One coordinate of a point.
#[derive(Clone, Debug)]
pub enum Coordinate {
    Exact(Radical),
    Float(BigFloat),
}

impl Coordinate {
    pub fn exact(&self) -> Option<&Radical> {
        match self {
            Coordinate::Exact(r) => Some(r),
            Coordinate::Float(_) => None,
        }
    }

    pub fn to_f64(&self, cc: &mut Consts) -> f64 {
        match self {
            Coordinate::Exact(r) => r.to_f64(),
            Coordinate::Float(x) => bigfloat_to_f64(x, cc),
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize, cc: &mut Consts) -> String {
        let x = match self {
            Coordinate::Exact(r) => {
                if let Some(q) = r.as_rational() {
                    return crate::arith::AlgebraicNumber::from_rational(q)
                        .to_decimal(digits as u32);
                }
                r.to_bigfloat(REALIZE_PRECISION, cc)
            }
            Coordinate::Float(x) => x.clone(),
        };
        let v = bigfloat_to_f64(&x, cc);
        format!("{v:.*e}", digits.saturating_sub(1))
    }
}

impl Serialize for Coordinate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Coordinate::Exact(r) => match r.as_rational() {
                Some(q) => s.serialize_str(&format_rational(&q)),
                None => {
                    #[derive(Serialize)]
                    struct Term {
                        coefficient: String,
                        radicand: u64,
                    }
                    let terms: Vec<Term> = r
                        .terms()
                        .map(|(c, k)| Term {
                            coefficient: format_rational(c),
                            radicand: k,
                        })
                        .collect();
                    let mut m = s.serialize_map(Some(1))?;
                    m.serialize_entry("radicals", &terms)?;
                    m.end()
                }
            },
            Coordinate::Float(x) => s.serialize_str(&bigfloat_to_hex(x)),
        }
    }
}

/// Points of `ℝ^{p,q}`: the first `p` coordinates count positively, the last `q` negatively.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub signature: Signature,
    pub points: Vec<Vec<Coordinate>>,
    /// Short description of how the set was obtained.
    pub origin: String,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Points<'a>(&'a [Vec<Coordinate>]);
        impl Serialize for Points<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for p in self.0 {
                    seq.serialize_element(p)?;
                }
                seq.end()
            }
        }
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("schema", &1)?;
        m.serialize_entry("signature", &self.signature)?;
        m.serialize_entry("origin", &self.origin)?;
        m.serialize_entry("size", &self.points.len())?;
        m.serialize_entry("points", &Points(&self.points))?;
        m.end()
    }
}

impl PointSet {
    fn exact(signature: Signature, points: Vec<Vec<Radical>>, origin: String) -> Self {
        PointSet {
            signature,
            points: points
                .into_iter()
                .map(|p| p.into_iter().map(Coordinate::Exact).collect())
                .collect(),
            origin,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.signature.positives + self.signature.negatives
    }

    pub fn is_exact(&self) -> bool {
        self.points.iter().flatten().all(|c| c.exact().is_some())
    }

    /// `‖x_i − x_j‖` in exact arithmetic, `None` for floating coordinates.
    pub fn distance_exact(&self, i: usize, j: usize) -> Option<Radical> {
        let p = self.signature.positives;
        let mut acc = Radical::zero();
        for (k, (x, y)) in self.points[i].iter().zip(&self.points[j]).enumerate() {
            let d = x.exact()?.sub(y.exact()?).square();
            acc = if k < p { acc.add(&d) } else { acc.sub(&d) };
        }
        Some(acc)
    }

    /// Exact distance matrix, `None` unless every coordinate is exact.
    pub fn distances_exact(&self) -> Option<Vec<Vec<Radical>>> {
        let n = self.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let vals: Vec<Option<Radical>> = pairs
            .par_iter()
            .map(|&(i, j)| self.distance_exact(i, j))
            .collect();
        let mut out = vec![vec![Radical::zero(); n]; n];
        for ((i, j), v) in pairs.into_iter().zip(vals) {
            let v = v?;
            out[i][j] = v.clone();
            out[j][i] = v;
        }
        Some(out)
    }

    /// Distinct off-diagonal exact distances.
    pub fn distance_values(&self) -> Option<BTreeSet<Radical>> {
        let d = self.distances_exact()?;
        let n = d.len();
        Some(
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| d[i][j].clone())
                .collect(),
        )
    }

    /// The distance matrix when all distances are rational.
    pub fn rational_distance_matrix(&self) -> Option<RatMatrix> {
        let d = self.distances_exact()?;
        let n = d.len();
        let mut m = RatMatrix::zeros(n, n);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.as_rational()?);
            }
        }
        Some(m)
    }

    /// Whether pairs with `adjacent(i, j)` are at distance `a` and all others at `b`.
    pub fn matches_pattern(
        &self,
        adjacent: impl Fn(usize, usize) -> bool + Sync,
        a: &Radical,
        b: &Radical,
    ) -> bool {
        let Some(d) = self.distances_exact() else {
            return false;
        };
        let n = d.len();
        (0..n)
            .into_par_iter()
            .all(|i| (i + 1..n).all(|j| &d[i][j] == if adjacent(i, j) { a } else { b }))
    }

    /// Comma-separated decimal coordinates, one point per line, with a header.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut cc = Consts::new().expect("constants cache");
        let mut out = String::from("point");
        for k in 0..self.dim() {
            let sign = if k < self.signature.positives {
                '+'
            } else {
                '-'
            };
            out.push_str(&format!(",x{}{sign}", k + 1));
        }
        out.push('\n');
        for (i, p) in self.points.iter().enumerate() {
            out.push_str(&i.to_string());
            for c in p {
                out.push(',');
                out.push_str(&c.to_decimal(digits, &mut cc));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point sets serialize")
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn unit(dim: usize, i: usize) -> Vec<Radical> {
    let mut v = vec![Radical::zero(); dim];
    v[i] = Radical::int(1);
    v
}

/// Adjacency of the vertex layout `{0} ∪ {1..p} ∪ pairs` used by [`construct_johnson_family`]:
/// the apex meets every singleton, a singleton meets the pairs containing it, and two pairs
/// meet when disjoint.
pub fn johnson_adjacency(p: usize) -> impl Fn(usize, usize) -> bool + Sync {
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
        .collect();
    move |u: usize, v: usize| {
        let (u, v) = (u.min(v), u.max(v));
        let single = |x: usize| (1..=p).contains(&x);
        let pair = |x: usize| pairs[x - 1 - p];
        match (u, v) {
            (0, v) => single(v),
            (u, v) if single(u) && single(v) => false,
            (u, v) if single(u) => {
                let (a, b) = pair(v);
                a == u - 1 || b == u - 1
            }
            (u, v) => {
                let (a, b) = pair(u);
                let (c, d) = pair(v);
                a != c && a != d && b != c && b != d
            }
        }
    }
}

/// The 22-point set in `ℝ^{6,1}` with distances `4` (adjacent) and `2`.
pub fn construct_22point() -> PointSet {
    let dim = 7;
    let mut pts = Vec::new();
    pts.push(
        (0..dim)
            .map(|k| {
                if k < 6 {
                    Radical::rational(rat(2, 3))
                } else {
                    Radical::zero()
                }
            })
            .collect(),
    );
    for i in 0..6 {
        let mut v = unit(dim, 6);
        v[i] = Radical::int(-1);
        pts.push(v);
    }
    for i in 0..6 {
        for j in i + 1..6 {
            let mut v = unit(dim, i);
            v[j] = Radical::int(1);
            pts.push(v);
        }
    }
    PointSet::exact(Signature::new(6, 1), pts, "johnson-type set, p = 6".into())
}

/// The apex coefficient `c` of the Johnson-type family: a root of `(9 − p)c² − 8c + 4`.
fn johnson_apex(p: usize) -> Radical {
    if p == 9 {
        return Radical::rational(rat(1, 2));
    }
    let k = 9 - p as i64;
    Radical::rational(rat(4, k)).sub(&Radical::term(rat(2, k), (p - 5) as u64))
}

/// `1 + p + p(p−1)/2` points in `ℝ^{p,1}` generalizing the 22-point set, for `p ≥ 5`.
///
/// The apex is `c·Σe_i + (2 − 3c)e_{p+1}`, singletons are `−e_i + e_{p+1}` and pairs `e_i + e_j`.
pub fn construct_johnson_family(p: usize) -> Result<PointSet, ConstructionError> {
    if p < 5 {
        return Err(ConstructionError::InvalidParameter(format!(
            "johnson family needs p ≥ 5, got {p}"
        )));
    }
    let dim = p + 1;
    let c = johnson_apex(p);
    let s = Radical::int(2).sub(&c.scale(&rat(3, 1)));
    let mut pts = Vec::new();
    let mut apex = vec![c; dim];
    apex[p] = s;
    pts.push(apex);
    for i in 0..p {
        let mut v = unit(dim, p);
        v[i] = Radical::int(-1);
        pts.push(v);
    }
    for i in 0..p {
        for j in i + 1..p {
            let mut v = unit(dim, i);
            v[j] = Radical::int(1);
            pts.push(v);
        }
    }
    Ok(PointSet::exact(
        Signature::new(p, 1),
        pts,
        format!("johnson-type set, p = {p}"),
    ))
}

/// The constants `c1..c4` of the `ℝ^{n,1}` family.
pub fn family_pq1_constants(n: usize) -> Result<[Radical; 4], ConstructionError> {
    if n < 7 {
        return Err(ConstructionError::InvalidParameter(format!(
            "family needs n ≥ 7, got {n}"
        )));
    }
    if n == 9 {
        return Ok([
            Radical::rational(rat(3, 4)),
            Radical::rational(rat(3, 4)),
            Radical::rational(rat(-2, 3)),
            Radical::rational(rat(2, 3)),
        ]);
    }
    let ni = n as i64;
    let c1 = Radical::rational(rat(3, 4));
    let c2 = Radical::term(rat(1, 4 * ni), (n * (25 * n - 144)) as u64);
    let d2 = Radical::sqrt((3 * n * (n - 6)) as u64);
    let c3 = Radical::int(3 * (2 * ni - 9))
        .add(&d2.mul(&c2).scale(&rat(4, 1)))
        .scale(&rat(1, 4 * (ni - 9)));
    let c4 = c1
        .mul(&c3)
        .add(&Radical::int(2))
        .scale(&rat(ni, 1))
        .sub(&Radical::int(9))
        .mul(&c2.scale(&rat(ni, 1)).inverse()?);
    Ok([c1, c2, c3, c4])
}

/// The `ℝ^{n,1}` family in its ambient `ℝ^{n+1,1}` coordinates `(e_1..e_n, e_{n+1}, e_{n+2})`.
pub fn construct_family_pq1_ambient(n: usize) -> Result<PointSet, ConstructionError> {
    let [c1, c2, c3, c4] = family_pq1_constants(n)?;
    let dim = n + 2;
    let base = Radical::rational(rat(3, n as i64));
    let mut pts = Vec::new();
    for (x, y) in [(&c1, &c2), (&c3, &c4)] {
        for i in 0..n {
            let mut v = vec![base.clone(); dim];
            v[i] = base.sub(&Radical::int(1));
            v[n] = x.clone();
            v[n + 1] = y.clone();
            pts.push(v);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit(dim, i);
            v[j] = Radical::int(1);
            pts.push(v);
        }
    }
    Ok(PointSet::exact(
        Signature::new(n + 1, 1),
        pts,
        format!("family in R^{{{n},1}}, ambient coordinates"),
    ))
}

/// `n(n+3)/2` points in `ℝ^{n,1}` with distances `4` and `2`, for `n ≥ 7`.
///
/// The ambient points lie on the hyperplane where the first `n` coordinates sum to `2`; they are
/// rewritten in the orthonormal basis `(e_1 + … + e_k − k·e_{k+1})/√(k(k+1))` of its direction.
pub fn construct_family_pq1(n: usize) -> Result<PointSet, ConstructionError> {
    let amb = construct_family_pq1_ambient(n)?;
    let pts = amb
        .points
        .iter()
        .map(|p| {
            let x: Vec<&Radical> = p.iter().map(|c| c.exact().expect("exact")).collect();
            let mut out = Vec::with_capacity(n + 1);
            let mut prefix = Radical::zero();
            for k in 1..n {
                prefix = prefix.add(x[k - 1]);
                let num = prefix.sub(&x[k].scale(&rat(k as i64, 1)));
                let kk = (k * (k + 1)) as u64;
                out.push(num.mul(&Radical::term(rat(1, kk as i64), kk)));
            }
            out.push(x[n].clone());
            out.push(x[n + 1].clone());
            out
        })
        .collect();
    Ok(PointSet::exact(
        Signature::new(n, 1),
        pts,
        format!("family in R^{{{n},1}}"),
    ))
}

/// Adjacency of the `ℝ^{n,1}` family's vertices, ordered `v_{i,1}`, `v_{i,2}`, then pairs.
pub fn family_pq1_adjacency(n: usize) -> impl Fn(usize, usize) -> bool + Sync {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    move |u: usize, v: usize| {
        let (u, v) = (u.min(v), u.max(v));
        let class = |x: usize| {
            if x < 2 * n {
                (x / n, x % n)
            } else {
                (2, x - 2 * n)
            }
        };
        match (class(u), class(v)) {
            ((0, i), (1, j)) => i != j,
            ((2, s), (2, t)) => {
                let (a, b) = pairs[s];
                let (c, d) = pairs[t];
                a != c && a != d && b != c && b != d
            }
            ((x, i), (2, s)) if x < 2 => pairs[s].0 == i || pairs[s].1 == i,
            _ => false,
        }
    }
}

fn entry_bigfloat(
    d: &DissimilarityMatrix,
    i: usize,
    j: usize,
    cc: &mut Consts,
    b: Option<&BigFloat>,
) -> BigFloat {
    let p = REALIZE_PRECISION;
    match d {
        DissimilarityMatrix::Rational(m) => rational_to_bigfloat(m.get(i, j), p, cc),
        DissimilarityMatrix::Relation(r) => {
            if i == j {
                BigFloat::from_word(0, p)
            } else if r.graph.has_edge(i, j) {
                BigFloat::from_i64(r.branch.sign(), p)
            } else {
                b.expect("b converted").clone()
            }
        }
    }
}

fn relation_b(d: &DissimilarityMatrix, cc: &mut Consts) -> Option<BigFloat> {
    let DissimilarityMatrix::Relation(r) = d else {
        return None;
    };
    let width = Rational::new(BigInt::one(), BigInt::one() << (REALIZE_PRECISION + 16));
    let b = r.b.refine(&width);
    Some(rational_to_bigfloat(
        &crate::arith::rational::midpoint(b.lo(), b.hi()),
        REALIZE_PRECISION,
        cc,
    ))
}

/// Eigenvalues and column eigenvectors of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigen(mut a: Vec<Vec<BigFloat>>) -> (Vec<BigFloat>, Vec<Vec<BigFloat>>) {
    let p = REALIZE_PRECISION;
    let n = a.len();
    let zero = BigFloat::from_word(0, p);
    let one = BigFloat::from_word(1, p);
    let two = BigFloat::from_word(2, p);
    let mut v: Vec<Vec<BigFloat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let frob = a
        .iter()
        .flatten()
        .fold(zero.clone(), |s, x| s.add(&x.mul(x, p, RM), p, RM));
    let mut eps = BigFloat::from_word(1, p);
    eps.set_exponent(-(p as i32) + 8);
    let threshold = frob.mul(&eps, p, RM).mul(&eps, p, RM);
    for _sweep in 0..100 {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(zero.clone(), |s, (i, j)| {
                s.add(&a[i][j].mul(&a[i][j], p, RM), p, RM)
            });
        if off.cmp(&threshold).is_none_or(|c| c <= 0) {
            break;
        }
        for r in 0..n {
            for s in r + 1..n {
                if a[r][s].is_zero() {
                    continue;
                }
                let theta = a[s][s]
                    .sub(&a[r][r], p, RM)
                    .div(&two.mul(&a[r][s], p, RM), p, RM);
                let root = theta.mul(&theta, p, RM).add(&one, p, RM).sqrt(p, RM);
                let mut t = one.div(&theta.abs().add(&root, p, RM), p, RM);
                if theta.is_negative() {
                    t = t.neg();
                }
                let c = one.div(&t.mul(&t, p, RM).add(&one, p, RM).sqrt(p, RM), p, RM);
                let sn = t.mul(&c, p, RM);
                for row in a.iter_mut() {
                    let akr = row[r].clone();
                    let aks = row[s].clone();
                    row[r] = c.mul(&akr, p, RM).sub(&sn.mul(&aks, p, RM), p, RM);
                    row[s] = sn.mul(&akr, p, RM).add(&c.mul(&aks, p, RM), p, RM);
                }
                for k in 0..n {
                    let ark = a[r][k].clone();
                    let ask = a[s][k].clone();
                    a[r][k] = c.mul(&ark, p, RM).sub(&sn.mul(&ask, p, RM), p, RM);
                    a[s][k] = sn.mul(&ark, p, RM).add(&c.mul(&ask, p, RM), p, RM);
                }
                for row in v.iter_mut() {
                    let vr = row[r].clone();
                    let vs = row[s].clone();
                    row[r] = c.mul(&vr, p, RM).sub(&sn.mul(&vs, p, RM), p, RM);
                    row[s] = sn.mul(&vr, p, RM).add(&c.mul(&vs, p, RM), p, RM);
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i].clone()).collect(), v)
}

/// Numeric points whose indefinite distances reproduce `d` within `tolerance`.
///
/// The centred Gram matrix `F_D(j/n)/2` is diagonalized in 256-bit arithmetic; the number of
/// positive and negative coordinates is the exact embedding dimension of `d`.
pub fn realize(d: &DissimilarityMatrix, tolerance: f64) -> Result<PointSet, ConstructionError> {
    let p = REALIZE_PRECISION;
    let mut cc = Consts::new().expect("constants cache");
    let n = d.order();
    let sig = embedding_dimension(d);
    let b = relation_b(d, &mut cc);
    let dm: Vec<Vec<BigFloat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| entry_bigfloat(d, i, j, &mut cc, b.as_ref()))
                .collect()
        })
        .collect();
    let nf = BigFloat::from_u64(n as u64, p);
    let row_mean: Vec<BigFloat> = dm
        .iter()
        .map(|r| {
            r.iter()
                .fold(BigFloat::from_word(0, p), |s, x| s.add(x, p, RM))
                .div(&nf, p, RM)
        })
        .collect();
    let total = row_mean
        .iter()
        .fold(BigFloat::from_word(0, p), |s, x| s.add(x, p, RM))
        .div(&nf, p, RM);
    let half = BigFloat::from_f64(0.5, p);
    let gram: Vec<Vec<BigFloat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = dm[i][j]
                        .sub(&row_mean[i], p, RM)
                        .sub(&row_mean[j], p, RM)
                        .add(&total, p, RM);
                    c.mul(&half, p, RM).neg()
                })
                .collect()
        })
        .collect();
    let (vals, vecs) = jacobi_eigen(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| vals[y].cmp(&vals[x]).unwrap_or(0).cmp(&0));
    let mut cols: Vec<usize> = order[..sig.positives].to_vec();
    cols.extend(order[n - sig.negatives..].iter().rev());
    let scales: Vec<BigFloat> = cols.iter().map(|&k| vals[k].abs().sqrt(p, RM)).collect();
    let points: Vec<Vec<Coordinate>> = (0..n)
        .map(|i| {
            cols.iter()
                .zip(&scales)
                .map(|(&k, s)| Coordinate::Float(vecs[i][k].mul(s, p, RM)))
                .collect()
        })
        .collect();
    let set = PointSet {
        signature: sig,
        points,
        origin: "numeric realization".into(),
    };
    let dev = max_deviation(&set, &dm, &mut cc);
    if dev.is_nan() || dev > tolerance {
        return Err(ConstructionError::ToleranceExceeded {
            max_deviation: dev,
            tolerance,
        });
    }
    Ok(set)
}

fn float_coords(c: &Coordinate, cc: &mut Consts) -> BigFloat {
    match c {
        Coordinate::Float(x) => x.clone(),
        Coordinate::Exact(r) => r.to_bigfloat(REALIZE_PRECISION, cc),
    }
}

fn max_deviation(set: &PointSet, target: &[Vec<BigFloat>], cc: &mut Consts) -> f64 {
    let p = REALIZE_PRECISION;
    let pos = set.signature.positives;
    let mut worst = BigFloat::from_word(0, p);
    let coords: Vec<Vec<BigFloat>> = set
        .points
        .iter()
        .map(|pt| pt.iter().map(|c| float_coords(c, cc)).collect())
        .collect();
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let mut acc = BigFloat::from_word(0, p);
            for (k, (x, y)) in coords[i].iter().zip(&coords[j]).enumerate() {
                let t = x.sub(y, p, RM);
                let sq = t.mul(&t, p, RM);
                acc = if k < pos {
                    acc.add(&sq, p, RM)
                } else {
                    acc.sub(&sq, p, RM)
                };
            }
            let err = acc.sub(&target[i][j], p, RM).abs();
            if err.cmp(&worst).is_some_and(|c| c > 0) {
                worst = err;
            }
        }
    }
    bigfloat_to_f64(&worst, cc)
}

/// Indefinite distance matrix of `set` as floating point numbers.
pub fn float_distances(set: &PointSet) -> Vec<Vec<f64>> {
    let mut cc = Consts::new().expect("constants cache");
    let pos = set.signature.positives;
    let coords: Vec<Vec<f64>> = set
        .points
        .iter()
        .map(|pt| pt.iter().map(|c| c.to_f64(&mut cc)).collect())
        .collect();
    let n = coords.len();
    Matrix::from_fn(n, n, |i, j| {
        coords[i]
            .iter()
            .zip(&coords[j])
            .enumerate()
            .map(|(k, (x, y))| {
                if k < pos {
                    (x - y).powi(2)
                } else {
                    -(x - y).powi(2)
                }
            })
            .sum::<f64>()
    })
    .to_rows()
}

/// `n·(n+3)/2`, the family size.
pub fn family_pq1_size(n: usize) -> usize {
    n * (n + 3) / 2
}

/// Sum of the first `n` ambient coordinates of every family point.
pub fn family_pq1_hyperplane_sums(n: usize) -> Result<Vec<Radical>, ConstructionError> {
    let amb = construct_family_pq1_ambient(n)?;
    Ok(amb
        .points
        .iter()
        .map(|p| {
            p[..n]
                .iter()
                .fold(Radical::zero(), |s, c| s.add(c.exact().expect("exact")))
        })
        .collect())
}
