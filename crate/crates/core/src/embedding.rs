//! Dissimilarity matrices, embedding dimensions and representation types.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rational::format_rational;
use crate::arith::{alg_compare, isolate_roots, AlgebraicNumber, ArithError, IntPoly, Rational};
use crate::graph::{generate_all, graph6_decode, graph6_encode, Graph};
use crate::spectral::matrix::int_to_rat;
use crate::spectral::signature::int_signature;
use crate::spectral::{
    char_poly_bivariate, harmonic_main_sum, pencil_char_poly, signature, IntMatrix, Matrix,
    RatMatrix, Signature, SpectralError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("diagonal entry {0} is nonzero")]
    NonzeroDiagonal(usize),
    #[error("weight vector must satisfy l^T j = 1")]
    Normalization,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("distance b must differ from a and from 0")]
    BadDistance,
    #[error("sign(-D) = {neg_d} is incompatible with embedding dimension {dim}")]
    TypeInconsistency { neg_d: Signature, dim: Signature },
    #[error("D is of type {0}, not type 2")]
    NotTypeTwo(u8),
    #[error("centered relation matrices do not commute")]
    NotCommuting,
    #[error("distances must be distinct and nonzero")]
    DistinctDistances,
    #[error("no candidate radius reproduces the embedding dimension")]
    Uncertified,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Sign of the distance attached to edges: `D = a·A1 + b·A2` with `a = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn from_sign(a: i64) -> Option<Self> {
        match a {
            1 => Some(Branch::Plus),
            -1 => Some(Branch::Minus),
            _ => None,
        }
    }

    /// Distance `b` belonging to the eigenvalue `λ` of `PA1P`.
    pub fn distance(self, lambda: &AlgebraicNumber) -> Result<AlgebraicNumber, ArithError> {
        match self {
            Branch::Plus => lambda.mobius(1, 0, 1, 1),
            Branch::Minus => lambda.mobius(-1, 0, 1, 1),
        }
    }

    /// Eigenvalue `λ` of `PA1P` annihilated by `−PDP` at distance `b`.
    pub fn critical_eigenvalue(self, b: &AlgebraicNumber) -> Result<AlgebraicNumber, ArithError> {
        match self {
            Branch::Plus => b.mobius(1, 0, -1, 1),
            Branch::Minus => b.mobius(-1, 0, 1, 1),
        }
    }

    /// Embedding dimension from the eigenvalue counts of `PA1P` on `j⊥` below and above `λ`.
    pub fn orient(self, below: usize, above: usize) -> Signature {
        match self {
            Branch::Plus => Signature::new(below, above),
            Branch::Minus => Signature::new(above, below),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+1",
            Branch::Minus => "-1",
        })
    }
}

/// `D = a·A1 + b·A2` for a graph, `a = ±1`, `A1` the edges and `A2` the non-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    pub graph: Graph,
    pub branch: Branch,
    pub b: AlgebraicNumber,
}

/// Symmetric matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DissimilarityMatrix {
    Rational(RatMatrix),
    Relation(RelationMatrix),
}

impl DissimilarityMatrix {
    pub fn rational(m: RatMatrix) -> Result<Self, EmbeddingError> {
        if !m.is_symmetric() {
            return Err(EmbeddingError::NotSymmetric);
        }
        if let Some(i) = (0..m.order()).find(|&i| !m.get(i, i).is_zero()) {
            return Err(EmbeddingError::NonzeroDiagonal(i));
        }
        Ok(DissimilarityMatrix::Rational(m))
    }

    pub fn relation(
        graph: Graph,
        branch: Branch,
        b: AlgebraicNumber,
    ) -> Result<Self, EmbeddingError> {
        let a = AlgebraicNumber::from_int(branch.sign());
        if b.sign() == Ordering::Equal || b == a {
            return Err(EmbeddingError::BadDistance);
        }
        Ok(DissimilarityMatrix::Relation(RelationMatrix {
            graph,
            branch,
            b,
        }))
    }

    /// `J − I`: the regular simplex with unit squared distances.
    pub fn simplex(n: usize) -> Self {
        DissimilarityMatrix::Rational(Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::zero()
            } else {
                Rational::one()
            }
        }))
    }

    pub fn order(&self) -> usize {
        match self {
            DissimilarityMatrix::Rational(m) => m.order(),
            DissimilarityMatrix::Relation(r) => r.graph.order(),
        }
    }

    /// Entries as rationals when every entry is rational.
    pub fn to_rational(&self) -> Option<RatMatrix> {
        match self {
            DissimilarityMatrix::Rational(m) => Some(m.clone()),
            DissimilarityMatrix::Relation(r) => {
                let b = r.b.as_rational()?;
                let a = Rational::from_integer(r.branch.sign().into());
                let g = r.graph;
                Some(Matrix::from_fn(g.order(), g.order(), |i, j| {
                    if i == j {
                        Rational::zero()
                    } else if g.has_edge(i, j) {
                        a.clone()
                    } else {
                        b.clone()
                    }
                }))
            }
        }
    }

    /// `M0 + b·M1 = n²·(−PDP)` as an integer pencil (`M1 = 0` for rational matrices, scaled).
    fn centered_pencil(&self) -> (IntMatrix, IntMatrix, Option<AlgebraicNumber>) {
        match (self, self.to_rational()) {
            (DissimilarityMatrix::Relation(r), None) => {
                let a1 = r.graph.adjacency();
                let a2 = r.graph.non_adjacency();
                let m0 = centered(&a1).scale(&BigInt::from(-r.branch.sign()));
                let m1 = centered(&a2).neg();
                (m0, m1, Some(r.b.clone()))
            }
            (_, Some(m)) => {
                let n = m.order();
                let (im, _) = crate::spectral::matrix::clear_denominators(&m);
                let m0 = centered(&im).neg();
                (m0, IntMatrix::zeros(n, n), None)
            }
            _ => unreachable!(),
        }
    }
}

impl Serialize for DissimilarityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rel<'a> {
            graph6: String,
            a: i64,
            b: &'a AlgebraicNumber,
        }
        #[derive(Serialize)]
        struct Rat<'a> {
            matrix: &'a RatMatrix,
        }
        match self {
            DissimilarityMatrix::Rational(m) => Rat { matrix: m }.serialize(s),
            DissimilarityMatrix::Relation(r) => Rel {
                graph6: graph6_encode(&r.graph),
                a: r.branch.sign(),
                b: &r.b,
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for DissimilarityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Rel {
                graph6: String,
                a: i64,
                b: AlgebraicNumber,
            },
            Rat {
                matrix: RatMatrix,
            },
        }
        match Repr::deserialize(d)? {
            Repr::Rat { matrix } => DissimilarityMatrix::rational(matrix).map_err(D::Error::custom),
            Repr::Rel { graph6, a, b } => {
                let g = graph6_decode(&graph6).map_err(D::Error::custom)?;
                let branch =
                    Branch::from_sign(a).ok_or_else(|| D::Error::custom("a must be 1 or -1"))?;
                DissimilarityMatrix::relation(g, branch, b).map_err(D::Error::custom)
            }
        }
    }
}

/// `(nI − J)·A·(nI − J)`, i.e. `n²·PAP`.
pub fn centered(a: &IntMatrix) -> IntMatrix {
    let n = a.order();
    let nn = BigInt::from(n);
    let c = Matrix::from_fn(n, n, |i, j| if i == j { &nn - 1 } else { BigInt::from(-1) });
    c.mul(a).mul(&c)
}

/// `F_M(ℓ) = −(I − jℓᵀ) M (I − ℓjᵀ)`.
pub fn f_matrix(m: &RatMatrix, l: &[Rational]) -> Result<RatMatrix, EmbeddingError> {
    let n = m.order();
    if l.len() != n {
        return Err(EmbeddingError::DimensionMismatch {
            expected: n,
            got: l.len(),
        });
    }
    if l.iter().sum::<Rational>() != Rational::one() {
        return Err(EmbeddingError::Normalization);
    }
    let left = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j {
            Rational::one()
        } else {
            Rational::zero()
        };
        id - &l[j]
    });
    Ok(left.mul(m).mul(&left.transpose()).neg())
}

pub fn uniform_weights(n: usize) -> Vec<Rational> {
    vec![Rational::new(BigInt::one(), BigInt::from(n)); n]
}

/// Signature of `F_D(j/n)`.
pub fn embedding_dimension(d: &DissimilarityMatrix) -> Signature {
    if let Some(m) = d.to_rational() {
        return signature(&f_matrix(&m, &uniform_weights(m.order())).expect("uniform weights"));
    }
    let (m0, m1, b) = d.centered_pencil();
    pencil_char_poly(&m0, &m1).signature_at_algebraic(b.as_ref().expect("algebraic distance"))
}

/// Signature of `−D`.
pub fn neg_signature(d: &DissimilarityMatrix) -> Signature {
    if let Some(m) = d.to_rational() {
        return signature(&m.neg());
    }
    let DissimilarityMatrix::Relation(r) = d else {
        unreachable!()
    };
    char_poly_bivariate(
        &r.graph.adjacency(),
        &r.graph.non_adjacency(),
        r.branch.sign(),
    )
    .expect("graph relations cover J - I")
    .signature_at_algebraic(&r.b)
}

/// Types (1)–(4) from comparing `sign(−D)` with the embedding dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RepresentationType(pub u8);

impl fmt::Display for RepresentationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn type_from_signatures(
    neg_d: Signature,
    dim: Signature,
) -> Result<RepresentationType, EmbeddingError> {
    let (p, q) = (dim.positives, dim.negatives);
    let t = match (neg_d.positives, neg_d.negatives) {
        (x, y) if x == p + 1 && y == q + 1 => 1,
        (x, y) if x == p && y == q + 1 => 2,
        (x, y) if x == p + 1 && y == q => 3,
        (x, y) if x == p && y == q => 4,
        _ => return Err(EmbeddingError::TypeInconsistency { neg_d, dim }),
    };
    Ok(RepresentationType(t))
}

pub fn classify_type(d: &DissimilarityMatrix) -> Result<RepresentationType, EmbeddingError> {
    type_from_signatures(neg_signature(d), embedding_dimension(d))
}

/// Signature of `F_M(ℓ)` from `sign(M)`, the mainness of 0 and the sign of `Σ β_i²/λ_i`.
pub fn theorem33_signature(m: &RatMatrix) -> Signature {
    let s = signature(m);
    let (p, q) = (s.positives, s.negatives);
    match harmonic_main_sum(m) {
        Err(_) => Signature::new(q, p),
        Ok(h) => match h.sign {
            Ordering::Equal => Signature::new(q.saturating_sub(1), p.saturating_sub(1)),
            Ordering::Greater => Signature::new(q, p.saturating_sub(1)),
            Ordering::Less => Signature::new(q.saturating_sub(1), p),
        },
    }
}

/// Polynomial whose roots, with multiplicity, are the eigenvalues of `PAP` on `j⊥`.
pub fn jperp_polynomial(a: &IntMatrix) -> IntPoly {
    jperp_polynomial_small(a).unwrap_or_else(|| jperp_polynomial_big(a))
}

/// Fast path: `n·PAP` restricted to `j⊥` in the basis `e_i − e_n` is an integer matrix of
/// order `n − 1`, whose characteristic polynomial is computed in `i128` with overflow checks.
fn jperp_polynomial_small(a: &IntMatrix) -> Option<IntPoly> {
    use num_traits::ToPrimitive;
    let n = a.order();
    if n < 2 {
        return None;
    }
    let m = n - 1;
    let entry = |i: usize, j: usize| a.get(i, j).to_i128();
    let mut sums = Vec::with_capacity(n);
    for j in 0..n {
        let mut s = 0i128;
        for i in 0..n {
            s = s.checked_add(entry(i, j)?)?;
        }
        sums.push(s);
    }
    let nn = n as i128;
    let mut mat = vec![0i128; m * m];
    for k in 0..m {
        for i in 0..m {
            let v = entry(k, i)?.checked_sub(entry(k, m)?)?;
            let s = sums[i].checked_sub(sums[m])?;
            mat[k * m + i] = nn.checked_mul(v)?.checked_sub(s)?;
        }
    }
    let cp = berkowitz_i128(&mat, m)?;
    // Roots of `cp` are `n·λ`; substitute `x = n·λ`.
    let mut pow = BigInt::one();
    let nb = BigInt::from(n);
    let mut coeffs = Vec::with_capacity(cp.len());
    for c in cp {
        coeffs.push(BigInt::from(c) * &pow);
        pow *= &nb;
    }
    Some(IntPoly::new(coeffs).primitive())
}

/// Division-free characteristic polynomial (lowest degree first), `None` on overflow.
fn berkowitz_i128(mat: &[i128], n: usize) -> Option<Vec<i128>> {
    let get = |i: usize, j: usize| mat[i * n + j];
    let mut vect = vec![1i128, get(n - 1, n - 1).checked_neg()?];
    for i in (0..n - 1).rev() {
        let k = n - 1 - i;
        let r: Vec<i128> = (i + 1..n).map(|j| get(i, j)).collect();
        let mut c: Vec<i128> = (i + 1..n).map(|j| get(j, i)).collect();
        let mut items = Vec::with_capacity(k + 2);
        items.push(1i128);
        items.push(get(i, i).checked_neg()?);
        for step in 0..k {
            if step > 0 {
                let mut next = vec![0i128; k];
                for (row, slot) in next.iter_mut().enumerate() {
                    let mut acc = 0i128;
                    for (col, cv) in c.iter().enumerate() {
                        let e = get(i + 1 + row, i + 1 + col);
                        if e != 0 {
                            acc = acc.checked_add(e.checked_mul(*cv)?)?;
                        }
                    }
                    *slot = acc;
                }
                c = next;
            }
            let mut rc = 0i128;
            for (x, y) in r.iter().zip(&c) {
                if *x != 0 {
                    rc = rc.checked_add(x.checked_mul(*y)?)?;
                }
            }
            items.push(rc.checked_neg()?);
        }
        let mut next = vec![0i128; k + 2];
        for (row, slot) in next.iter_mut().enumerate() {
            let mut acc = 0i128;
            for (col, v) in vect.iter().enumerate() {
                if row >= col && row - col < items.len() {
                    acc = acc.checked_add(items[row - col].checked_mul(*v)?)?;
                }
            }
            *slot = acc;
        }
        vect = next;
    }
    vect.reverse();
    Some(vect)
}

fn jperp_polynomial_big(a: &IntMatrix) -> IntPoly {
    let n = a.order();
    let cp = IntPoly::new(centered(a).char_poly_coeffs());
    debug_assert!(cp.coeff(0).is_zero());
    let reduced = cp.shift_down(1);
    let n2 = BigInt::from(n * n);
    let mut pow = BigInt::one();
    let mut coeffs = Vec::with_capacity(reduced.degree() + 1);
    for c in reduced.coeffs() {
        coeffs.push(c * &pow);
        pow *= &n2;
    }
    IntPoly::new(coeffs).primitive()
}

/// Distinct eigenvalues of `PA1P` on `j⊥` in increasing order, with multiplicities.
#[derive(Clone, Debug)]
pub struct RelationSpectrum {
    pub poly: IntPoly,
    pub roots: Vec<(AlgebraicNumber, usize)>,
}

impl RelationSpectrum {
    pub fn of_graph(g: &Graph) -> Self {
        Self::of_matrix(&g.adjacency())
    }

    pub fn of_matrix(a1: &IntMatrix) -> Self {
        let poly = jperp_polynomial(a1);
        let mut roots: Vec<(AlgebraicNumber, usize)> = Vec::new();
        if poly.degree() > 0 {
            for (f, mult) in poly.squarefree_decompose() {
                roots.extend(isolate_roots(&f).into_iter().map(|r| (r, mult)));
            }
        }
        roots.sort_by(|x, y| alg_compare(&x.0, &y.0));
        RelationSpectrum { poly, roots }
    }

    /// Multiplicities of eigenvalues below, equal to and above `c`.
    pub fn split(&self, c: &AlgebraicNumber) -> (usize, usize, usize) {
        let (mut lo, mut eq, mut hi) = (0, 0, 0);
        for (r, m) in &self.roots {
            match alg_compare(r, c) {
                Ordering::Less => lo += m,
                Ordering::Equal => eq += m,
                Ordering::Greater => hi += m,
            }
        }
        (lo, eq, hi)
    }

    /// Embedding dimension of `a·A1 + b·A2` from the affine eigenvalue relation
    /// `−PDP = (b − a)·PA1P + b·P`.
    pub fn dimension(&self, branch: Branch, b: &AlgebraicNumber) -> Result<Signature, ArithError> {
        let c = branch.critical_eigenvalue(b)?;
        let (lo, _, hi) = self.split(&c);
        Ok(branch.orient(lo, hi))
    }
}

/// Dimensionality from the joint spectrum of mutually commuting centered relation matrices.
///
/// On a common eigenspace in `j⊥` the quadratic form `−xᵀDx` equals `𝔞ᵀ𝔳(x)`, so positive
/// and negative values of `𝔞ᵀ𝔳` count the signature.
pub fn commuting_dimensionality(
    relations: &[IntMatrix],
    coeffs: &[Rational],
) -> Result<Signature, EmbeddingError> {
    if relations.len() != coeffs.len() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: relations.len(),
            got: coeffs.len(),
        });
    }
    let n = relations.first().map_or(0, |r| r.order());
    for i in 0..n {
        for j in 0..n {
            let total: BigInt = relations.iter().map(|r| r.get(i, j)).sum();
            let want = if i == j {
                BigInt::zero()
            } else {
                BigInt::one()
            };
            if total != want {
                return Err(SpectralError::RelationCover.into());
            }
        }
    }
    let centered_rel: Vec<IntMatrix> = relations.iter().map(centered).collect();
    for x in 0..centered_rel.len() {
        for y in x + 1..centered_rel.len() {
            if centered_rel[x].mul(&centered_rel[y]) != centered_rel[y].mul(&centered_rel[x]) {
                return Err(EmbeddingError::NotCommuting);
            }
        }
    }
    if relations.len() == 2 {
        // 𝔳 = (−μ, 1 + μ) on the eigenspace of μ, so 𝔞ᵀ𝔳 = (a2 − a1)·μ + a2.
        let spec = RelationSpectrum::of_matrix(&relations[0]);
        let slope = &coeffs[1] - &coeffs[0];
        let (mut p, mut q) = (0, 0);
        if slope.is_zero() {
            let m = n.saturating_sub(1);
            match coeffs[1].cmp(&Rational::zero()) {
                Ordering::Greater => p = m,
                Ordering::Less => q = m,
                Ordering::Equal => {}
            }
            return Ok(Signature::new(p, q));
        }
        let root = AlgebraicNumber::from_rational(-&coeffs[1] / &slope);
        let (lo, _, hi) = spec.split(&root);
        return Ok(if slope.is_positive() {
            Signature::new(hi, lo)
        } else {
            Signature::new(lo, hi)
        });
    }
    let mut combo = Matrix::zeros(n, n);
    for (r, c) in centered_rel.iter().zip(coeffs) {
        combo = combo.add(&int_to_rat(r).scale(c));
    }
    Ok(signature(&combo.neg()))
}

/// `𝔳(x) = −(xᵀA_1x, …, xᵀA_sx)`.
pub fn vmap(relations: &[IntMatrix], x: &[Rational]) -> Vec<Rational> {
    relations
        .iter()
        .map(|a| {
            let ax = int_to_rat(a).mul_vec(x);
            -ax.iter().zip(x).map(|(u, v)| u * v).sum::<Rational>()
        })
        .collect()
}

/// Some principal submatrix of `n²·F_D(j/n)` of order `p + q` with signature `(p, q)`.
pub fn principal_witness(d: &DissimilarityMatrix) -> Option<Vec<usize>> {
    let dim = embedding_dimension(d);
    let r = dim.rank();
    let n = d.order();
    let (m0, m1, b) = d.centered_pencil();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let s0 = m0.principal(&idx);
        let sig = match &b {
            None => int_signature(&s0),
            Some(b) => pencil_char_poly(&s0, &m1.principal(&idx)).signature_at_algebraic(b),
        };
        if sig == dim {
            return Some(idx);
        }
        let mut k = r;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if idx[k] < n - r + k {
                break;
            }
        }
        idx[k] += 1;
        for t in k + 1..r {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

pub fn bound_ambient(p: u64, q: u64, s: u64) -> u64 {
    binomial(p + q + s, s)
}

pub fn bound_sphere(p: u64, q: u64, s: u64) -> u64 {
    binomial(p + q + s - 1, s) + binomial(p + q + s - 2, s - 1)
}

pub fn bound_sphere_q1(p: u64, s: u64) -> u64 {
    binomial(p + s, s)
}

/// `K_i = Π_{j≠i} α_j/(α_j − α_i)`.
pub fn k_integrality(distances: &[Rational]) -> Result<Vec<Rational>, EmbeddingError> {
    let s = distances.len();
    let mut out = Vec::with_capacity(s);
    for i in 0..s {
        if distances[i].is_zero() {
            return Err(EmbeddingError::DistinctDistances);
        }
        let mut k = Rational::one();
        for j in 0..s {
            if j == i {
                continue;
            }
            let diff = &distances[j] - &distances[i];
            if diff.is_zero() {
                return Err(EmbeddingError::DistinctDistances);
            }
            k *= &distances[j] / diff;
        }
        out.push(k);
    }
    Ok(out)
}

/// End point of a `b`-interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint(pub AlgebraicNumber);

/// A set of distances `b` on which a graph has a fixed embedding dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BRegion {
    /// A single distance, annihilating the eigenvalue `lambda` of `PA1P`.
    Point {
        lambda: AlgebraicNumber,
        b: AlgebraicNumber,
    },
    /// The open interval `(lo, hi)` of distances.
    Interval {
        lo: AlgebraicNumber,
        hi: AlgebraicNumber,
        sample: String,
    },
}

impl BRegion {
    pub fn is_point(&self) -> bool {
        matches!(self, BRegion::Point { .. })
    }
}

/// Piecewise-constant embedding dimension of `a·A1 + b·A2` over `b ∈ (−1, 0) ∪ (0, 1)`.
pub fn dimension_profile(spec: &RelationSpectrum, branch: Branch) -> Vec<(BRegion, Signature)> {
    let minus_half = AlgebraicNumber::from_rational(Rational::new((-1).into(), 2.into()));
    let zero = AlgebraicNumber::from_int(0);
    // Breakpoints in the λ-parametrisation λ ∈ (−1/2, ∞).
    let mut cuts: Vec<AlgebraicNumber> = vec![zero.clone()];
    for (r, _) in &spec.roots {
        if alg_compare(r, &minus_half) == Ordering::Greater && r.sign() != Ordering::Equal {
            cuts.push(r.clone());
        }
    }
    cuts.sort();
    let mut out = Vec::new();
    let to_b = |lam: &AlgebraicNumber| branch.distance(lam).expect("λ > −1/2");
    let mut left: Option<AlgebraicNumber> = None;
    for i in 0..=cuts.len() {
        let lo_l = left.clone();
        let hi_l = cuts.get(i).cloned();
        let sample_l = interior_rational(lo_l.as_ref(), hi_l.as_ref());
        let sample_alg = AlgebraicNumber::from_rational(sample_l.clone());
        let (lo, _, hi) = spec.split(&sample_alg);
        let b_lo = lo_l
            .as_ref()
            .map(to_b)
            .unwrap_or_else(|| AlgebraicNumber::from_int(-branch.sign()));
        let b_hi = hi_l
            .as_ref()
            .map(to_b)
            .unwrap_or_else(|| AlgebraicNumber::from_int(branch.sign()));
        let (b_lo, b_hi) = if branch == Branch::Plus {
            (b_lo, b_hi)
        } else {
            (b_hi, b_lo)
        };
        let sample_b = to_b(&sample_alg).as_rational().expect("rational sample");
        out.push((
            BRegion::Interval {
                lo: b_lo,
                hi: b_hi,
                sample: format_rational(&sample_b),
            },
            branch.orient(lo, hi),
        ));
        if let Some(c) = hi_l {
            if c.sign() != Ordering::Equal {
                let (lo, _, hi) = spec.split(&c);
                out.push((
                    BRegion::Point {
                        b: to_b(&c),
                        lambda: c.clone(),
                    },
                    branch.orient(lo, hi),
                ));
            }
            left = Some(c);
        }
    }
    out
}

/// A rational strictly inside `(lo, hi)`, with `lo = None` meaning `−1/2` and `hi = None` meaning `+∞`.
fn interior_rational(lo: Option<&AlgebraicNumber>, hi: Option<&AlgebraicNumber>) -> Rational {
    let minus_half = Rational::new((-1).into(), 2.into());
    let mut lo = lo.cloned();
    let mut hi = hi.cloned();
    loop {
        let l = lo.as_ref().map_or(minus_half.clone(), |x| x.hi().clone());
        let h = match &hi {
            Some(x) => x.lo().clone(),
            None => {
                let base = if l < Rational::zero() {
                    Rational::zero()
                } else {
                    l.clone()
                };
                return base + Rational::one();
            }
        };
        if l < h {
            return crate::arith::rational::midpoint(&l, &h);
        }
        if let Some(x) = lo.as_mut() {
            x.bisect();
        }
        if let Some(x) = hi.as_mut() {
            x.bisect();
        }
    }
}

/// A graph together with distances giving a prescribed embedding dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanHit {
    #[serde(serialize_with = "ser_graph", deserialize_with = "de_graph")]
    pub graph: Graph,
    pub branch: Branch,
    pub region: BRegion,
}

pub(crate) fn ser_graph<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    graph6_encode(g).serialize(s)
}

pub(crate) fn de_graph<'de, D: Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
    let s = String::deserialize(d)?;
    graph6_decode(&s).map_err(serde::de::Error::custom)
}

/// Every graph of order `n`, branch and `b`-region whose embedding dimension is exactly `(p, q)`.
pub fn scan_small_orders(p: usize, q: usize, n: usize, branches: &[Branch]) -> Vec<ScanHit> {
    if n < 3 {
        return Vec::new();
    }
    let target = Signature::new(p, q);
    let graphs = generate_all(n);
    let mut hits: Vec<(usize, ScanHit)> = graphs
        .par_iter()
        .enumerate()
        .filter(|(_, g)| !g.is_complete() && !g.is_edgeless())
        .flat_map_iter(|(i, g)| {
            let spec = RelationSpectrum::of_graph(g);
            let mut local = Vec::new();
            for &branch in branches {
                for (region, sig) in dimension_profile(&spec, branch) {
                    if sig == target {
                        local.push((
                            i,
                            ScanHit {
                                graph: *g,
                                branch,
                                region,
                            },
                        ));
                    }
                }
            }
            local
        })
        .collect();
    hits.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.branch.cmp(&y.1.branch)));
    hits.into_iter().map(|(_, h)| h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::spectral::matrix::rat_from_i64;

    fn one_edge_matrix(sign: i64, b: Rational) -> RatMatrix {
        let a = int(sign);
        Matrix::from_rows(vec![
            vec![int(0), a.clone(), b.clone()],
            vec![a, int(0), b.clone()],
            vec![b.clone(), b, int(0)],
        ])
    }

    #[test]
    fn fast_jperp_polynomial_matches_bigint_path() {
        for n in 2..=7 {
            for g in generate_all(n) {
                let a = g.adjacency();
                assert_eq!(
                    jperp_polynomial_small(&a).unwrap(),
                    jperp_polynomial_big(&a),
                    "{}",
                    graph6_encode(&g)
                );
            }
        }
        let a = Graph::cycle(31).adjacency();
        assert_eq!(jperp_polynomial(&a), jperp_polynomial_big(&a));
    }

    #[test]
    fn f_matrix_projector() {
        let m = DissimilarityMatrix::simplex(3).to_rational().unwrap();
        let f = f_matrix(&m, &uniform_weights(3)).unwrap();
        assert_eq!(signature(&f), Signature::new(2, 0));
        assert_eq!(f.mul_vec(&uniform_weights(3)), vec![int(0); 3]);
        assert!(f_matrix(&m, &[int(1), int(1), int(0)]).is_err());
        let z = RatMatrix::zeros(3, 3);
        assert_eq!(f_matrix(&z, &[int(1), int(0), int(0)]).unwrap(), z);
    }

    #[test]
    fn eq5_dimensions_and_types() {
        let m1 = DissimilarityMatrix::rational(one_edge_matrix(1, rat(1, 5))).unwrap();
        let m2 = DissimilarityMatrix::rational(one_edge_matrix(-1, rat(1, 5))).unwrap();
        assert_eq!(embedding_dimension(&m1), Signature::new(1, 1));
        assert_eq!(classify_type(&m1).unwrap(), RepresentationType(3));
        assert_eq!(classify_type(&m2).unwrap(), RepresentationType(2));
        let m1_big = DissimilarityMatrix::rational(one_edge_matrix(1, rat(1, 3))).unwrap();
        assert_ne!(embedding_dimension(&m1_big), Signature::new(1, 1));
    }

    #[test]
    fn simplex_is_euclidean_type_two() {
        for n in 2..7 {
            let d = DissimilarityMatrix::simplex(n);
            assert_eq!(embedding_dimension(&d), Signature::new(n - 1, 0));
            assert_eq!(classify_type(&d).unwrap(), RepresentationType(2));
        }
    }

    #[test]
    fn four_case_signature_cases() {
        let j_minus_i = rat_from_i64(&[
            vec![0, 1, 1, 1],
            vec![1, 0, 1, 1],
            vec![1, 1, 0, 1],
            vec![1, 1, 1, 0],
        ]);
        assert_eq!(theorem33_signature(&j_minus_i), Signature::new(3, 0));
        let j = rat_from_i64(&[vec![1; 3], vec![1; 3], vec![1; 3]]);
        assert_eq!(theorem33_signature(&j), Signature::new(0, 0));
        let w = rat_from_i64(&[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let direct = signature(&f_matrix(&w, &uniform_weights(3)).unwrap());
        assert_eq!(theorem33_signature(&w), direct);
    }

    #[test]
    fn relation_spectrum_of_one_edge() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let s = RelationSpectrum::of_graph(&g);
        assert_eq!(s.roots.len(), 2);
        assert_eq!(s.roots[0].0, AlgebraicNumber::from_int(-1));
        assert_eq!(s.roots[1].0, AlgebraicNumber::from_rational(rat(1, 3)));
        let d = s
            .dimension(Branch::Plus, &AlgebraicNumber::from_rational(rat(1, 5)))
            .unwrap();
        assert_eq!(d, Signature::new(1, 1));
    }

    #[test]
    fn relation_and_pencil_agree() {
        let c7 = Graph::cycle(7);
        let cubic = IntPoly::from_i64s(&[-1, -2, 1, 1]);
        let lam = isolate_roots(&cubic)[1].clone();
        let b = Branch::Plus.distance(&lam).unwrap();
        let d = DissimilarityMatrix::relation(c7, Branch::Plus, b.clone()).unwrap();
        assert_eq!(embedding_dimension(&d), Signature::new(2, 2));
        let spec = RelationSpectrum::of_graph(&c7);
        assert_eq!(
            spec.dimension(Branch::Plus, &b).unwrap(),
            Signature::new(2, 2)
        );
        assert_eq!(classify_type(&d).unwrap(), RepresentationType(3));
        let neg = DissimilarityMatrix::relation(c7, Branch::Minus, b.neg()).unwrap();
        assert_eq!(embedding_dimension(&neg), Signature::new(2, 2));
        assert_eq!(classify_type(&neg).unwrap(), RepresentationType(2));
    }

    #[test]
    fn profile_of_one_edge_graph() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let spec = RelationSpectrum::of_graph(&g);
        let prof = dimension_profile(&spec, Branch::Plus);
        let hits: Vec<&BRegion> = prof
            .iter()
            .filter(|(_, s)| *s == Signature::new(1, 1))
            .map(|(r, _)| r)
            .collect();
        assert_eq!(hits.len(), 2);
        match hits[1] {
            BRegion::Interval { lo, hi, .. } => {
                assert_eq!(*lo, AlgebraicNumber::from_int(0));
                assert_eq!(*hi, AlgebraicNumber::from_rational(rat(1, 4)));
            }
            _ => panic!("expected an interval"),
        }
    }

    #[test]
    fn k_values() {
        assert_eq!(
            k_integrality(&[int(1), rat(1, 2)]).unwrap(),
            vec![int(-1), int(2)]
        );
        assert_eq!(
            k_integrality(&[int(1), rat(-1, 2)]).unwrap(),
            vec![rat(1, 3), rat(2, 3)]
        );
        assert_eq!(
            k_integrality(&[int(2), int(1)]).unwrap(),
            vec![int(-1), int(2)]
        );
        assert!(k_integrality(&[int(1), int(1)]).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(bound_ambient(4, 1, 2), 21);
        assert_eq!(bound_sphere(3, 3, 2), 27);
        assert_eq!(bound_sphere_q1(6, 2), 28);
        assert_eq!(bound_ambient(6, 1, 2), 36);
    }

    #[test]
    fn commuting_pentagon() {
        let c5 = Graph::cycle(5);
        let rel = [c5.adjacency(), c5.non_adjacency()];
        assert_eq!(
            commuting_dimensionality(&rel, &[int(1), int(1)]).unwrap(),
            Signature::new(4, 0)
        );
        let b = rat(2, 5);
        let d = DissimilarityMatrix::relation(
            c5,
            Branch::Plus,
            AlgebraicNumber::from_rational(b.clone()),
        )
        .unwrap();
        assert_eq!(
            commuting_dimensionality(&rel, &[int(1), b]).unwrap(),
            embedding_dimension(&d)
        );
    }

    #[test]
    fn vmap_lies_on_hyperplane() {
        let g = Graph::path(4);
        let rel = [g.adjacency(), g.non_adjacency()];
        let x = vec![int(1), int(-2), int(3), int(-2)];
        let v = vmap(&rel, &x);
        let xx: Rational = x.iter().map(|t| t * t).sum();
        assert_eq!(v.iter().sum::<Rational>(), xx);
    }

    #[test]
    fn witness_for_pentagon() {
        let c5 = Graph::cycle(5);
        let cubic = IntPoly::from_i64s(&[-1, -1, 1]);
        let lam = isolate_roots(&cubic)[1].clone();
        let d =
            DissimilarityMatrix::relation(c5, Branch::Plus, Branch::Plus.distance(&lam).unwrap())
                .unwrap();
        let w = principal_witness(&d).unwrap();
        assert_eq!(w.len(), embedding_dimension(&d).rank());
    }

    #[test]
    fn json_round_trip() {
        let d = DissimilarityMatrix::relation(
            Graph::cycle(5),
            Branch::Minus,
            AlgebraicNumber::from_rational(rat(1, 3)),
        )
        .unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"graph6\":\"Dhc\""));
        let back: DissimilarityMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
