//! Spherical representations: radii, minimal spheres and the largest spherical sets.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{alg_compare, alg_sign, isolate_roots, AlgebraicNumber, IntPoly, Rational};
use crate::embedding::{
    classify_type, embedding_dimension, BRegion, Branch, DissimilarityMatrix, EmbeddingError,
    RepresentationType,
};
use crate::graph::Graph;
use crate::spectral::field::rational_function_value;
use crate::spectral::main_spectrum::{harmonic_fraction_pencil, solve_rational};
use crate::spectral::signature::descartes_from_signs;
use crate::spectral::{
    char_poly_bivariate, pencil_char_poly, signature, BivariateCharPoly, IntMatrix, Matrix,
    RatMatrix, Signature,
};

mod classify;

pub use classify::{
    classify_spherical, classify_spherical_with, negated_type, spherical_sources, SphericalSource,
};

/// A sphere carrying `D`: `−D + aJ` is a Gram matrix of signature `target`, radius `r = a/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalPlacement {
    pub target: Signature,
    pub a: AlgebraicNumber,
    pub r: AlgebraicNumber,
}

/// `−D + sJ` as a function of the shift `s`.
pub enum GramPencil {
    Rational(RatMatrix),
    /// Characteristic polynomials of `−D` and `−D + J` as polynomials in `b`.
    Relation {
        p0: BivariateCharPoly,
        pj: BivariateCharPoly,
        b: AlgebraicNumber,
    },
}

impl GramPencil {
    pub fn new(d: &DissimilarityMatrix) -> Self {
        if let Some(m) = d.to_rational() {
            return GramPencil::Rational(m.neg());
        }
        let DissimilarityMatrix::Relation(r) = d else {
            unreachable!()
        };
        let a1 = r.graph.adjacency();
        let a2 = r.graph.non_adjacency();
        let a = r.branch.sign();
        let p0 = char_poly_bivariate(&a1, &a2, a).expect("graph relations cover J - I");
        let n = r.graph.order();
        let m0: IntMatrix =
            Matrix::from_fn(n, n, |i, j| BigInt::one() - a1.get(i, j) * BigInt::from(a));
        let pj = pencil_char_poly(&m0, &a2.neg());
        GramPencil::Relation {
            p0,
            pj,
            b: r.b.clone(),
        }
    }

    /// Signature of `−D + sJ` for rational `s`.
    pub fn signature_at(&self, s: &Rational) -> Signature {
        match self {
            GramPencil::Rational(m) => signature(&m.add(&RatMatrix::ones(m.order()).scale(s))),
            GramPencil::Relation { .. } => {
                let num = IntPoly::constant(s.numer().clone());
                let den = IntPoly::constant(s.denom().clone());
                self.signature_at_fraction(&num, &den)
            }
        }
    }

    /// Signature of `−D + sJ` for `s = num(b)/den(b)` with `den(b) ≠ 0`.
    ///
    /// The characteristic polynomial is affine in `s`, so `den·χ_s = (den − num)·χ_0 + num·χ_1`.
    fn signature_at_fraction(&self, num: &IntPoly, den: &IntPoly) -> Signature {
        let GramPencil::Relation { p0, pj, b } = self else {
            unreachable!("rational pencils use rational shifts")
        };
        let diff = den.sub(num);
        let signs: Vec<i8> = p0
            .coeffs
            .iter()
            .zip(&pj.coeffs)
            .map(|(c0, c1)| {
                let c = diff.mul(c0).add(&num.mul(c1));
                match alg_sign(&c, b) {
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                    Ordering::Greater => 1,
                }
            })
            .collect();
        descartes_from_signs(&signs)
    }
}

/// Whether `D` lies on a sphere of its own embedding space (type 2).
pub fn is_spherical_in_embedding(d: &DissimilarityMatrix) -> Result<bool, EmbeddingError> {
    Ok(classify_type(d)? == RepresentationType(2))
}

/// Radius parameter of a type 2 matrix, certified by the signature of `−D + aJ`.
pub fn spherical_radius(d: &DissimilarityMatrix) -> Result<SphericalPlacement, EmbeddingError> {
    let t = classify_type(d)?;
    if t != RepresentationType(2) {
        return Err(EmbeddingError::NotTypeTwo(t.0));
    }
    let target = embedding_dimension(d);
    let pencil = GramPencil::new(d);
    let a = match &pencil {
        GramPencil::Rational(m) => {
            let j = vec![Rational::one(); m.order()];
            let x = solve_rational(m, &j).ok_or(crate::spectral::SpectralError::JNotInRange)?;
            let s: Rational = x.iter().sum();
            if s.is_zero() {
                return Err(EmbeddingError::Uncertified);
            }
            let inv = Rational::one() / s;
            [inv.clone(), -inv]
                .into_iter()
                .find(|a| *a > Rational::zero() && pencil.signature_at(a) == target)
                .map(AlgebraicNumber::from_rational)
        }
        GramPencil::Relation { b, .. } => {
            let DissimilarityMatrix::Relation(r) = d else {
                unreachable!()
            };
            let a1 = r.graph.adjacency();
            let m0 = a1.scale(&BigInt::from(-r.branch.sign()));
            let m1 = r.graph.non_adjacency().neg();
            let (num, den) = harmonic_fraction_pencil(&m0, &m1, b)?;
            if alg_sign(&num, b) == Ordering::Equal {
                return Err(EmbeddingError::Uncertified);
            }
            let mut found = None;
            for top in [den.clone(), den.neg()] {
                let value = rational_function_value(b, &top.to_qpoly(), &num.to_qpoly())?;
                if value.sign() == Ordering::Greater
                    && pencil.signature_at_fraction(&top, &num) == target
                {
                    found = Some(value);
                    break;
                }
            }
            found
        }
    }
    .ok_or(EmbeddingError::Uncertified)?;
    let r = a.mobius(1, 0, 0, 2)?;
    Ok(SphericalPlacement { target, a, r })
}

/// Smallest sphere carrying `D`: its own space for type 2, one more positive dimension for
/// types 3 and 4, one more of each sign for type 1. Witness `a = 1` outside type 2.
pub fn minimal_spherical_dimension(
    d: &DissimilarityMatrix,
) -> Result<SphericalPlacement, EmbeddingError> {
    let t = classify_type(d)?;
    if t == RepresentationType(2) {
        return spherical_radius(d);
    }
    let dim = embedding_dimension(d);
    let target = match t.0 {
        1 => Signature::new(dim.positives + 1, dim.negatives + 1),
        _ => Signature::new(dim.positives + 1, dim.negatives),
    };
    let one = Rational::one();
    if GramPencil::new(d).signature_at(&one) != target {
        return Err(EmbeddingError::Uncertified);
    }
    let a = AlgebraicNumber::from_int(1);
    let r = a.mobius(1, 0, 0, 2)?;
    Ok(SphericalPlacement { target, a, r })
}

/// A rational strictly between two distinct algebraic numbers.
pub(crate) fn rational_between(lo: &AlgebraicNumber, hi: &AlgebraicNumber) -> Rational {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    loop {
        if lo.hi() < hi.lo() {
            return (lo.hi() + hi.lo()) / Rational::from_integer(2.into());
        }
        lo.bisect();
        hi.bisect();
    }
}

/// Subdivides an open `b`-interval of constant embedding dimension into pieces of constant type.
pub fn region_types(
    graph: &Graph,
    branch: Branch,
    lo: &AlgebraicNumber,
    hi: &AlgebraicNumber,
) -> Result<Vec<(BRegion, RepresentationType)>, EmbeddingError> {
    let p0 = char_poly_bivariate(&graph.adjacency(), &graph.non_adjacency(), branch.sign())?;
    let mut cuts: Vec<AlgebraicNumber> = Vec::new();
    for c in p0.coeffs.iter().filter(|c| !c.is_zero() && c.degree() > 0) {
        for r in isolate_roots(&c.squarefree_part()) {
            if alg_compare(&r, lo) == Ordering::Greater && alg_compare(&r, hi) == Ordering::Less {
                cuts.push(r);
            }
        }
    }
    cuts.sort_by(alg_compare);
    cuts.dedup_by(|a, b| alg_compare(a, b) == Ordering::Equal);
    let mut out = Vec::new();
    let mut left = lo.clone();
    for i in 0..=cuts.len() {
        let right = cuts.get(i).cloned().unwrap_or_else(|| hi.clone());
        let sample = rational_between(&left, &right);
        let d = DissimilarityMatrix::relation(
            *graph,
            branch,
            AlgebraicNumber::from_rational(sample.clone()),
        )?;
        out.push((
            BRegion::Interval {
                lo: left.clone(),
                hi: right.clone(),
                sample: crate::arith::rational::format_rational(&sample),
            },
            classify_type(&d)?,
        ));
        if i < cuts.len() {
            let d = DissimilarityMatrix::relation(*graph, branch, right.clone())?;
            let lambda = branch.critical_eigenvalue(&right)?;
            out.push((
                BRegion::Point {
                    lambda,
                    b: right.clone(),
                },
                classify_type(&d)?,
            ));
        }
        left = right;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use crate::graph::canonical_graph;

    fn one_edge(sign: i64, b: Rational) -> DissimilarityMatrix {
        let a = int(sign);
        DissimilarityMatrix::rational(Matrix::from_rows(vec![
            vec![int(0), a.clone(), b.clone()],
            vec![a, int(0), b.clone()],
            vec![b.clone(), b, int(0)],
        ]))
        .unwrap()
    }

    #[test]
    fn eq5_sphericity() {
        assert!(is_spherical_in_embedding(&one_edge(-1, rat(1, 5))).unwrap());
        assert!(!is_spherical_in_embedding(&one_edge(1, rat(1, 5))).unwrap());
        let lift = minimal_spherical_dimension(&one_edge(1, rat(1, 5))).unwrap();
        assert_eq!(lift.target, Signature::new(2, 1));
    }

    #[test]
    fn simplex_radius_matches_circumradius() {
        for n in 2..8i64 {
            let p = spherical_radius(&DissimilarityMatrix::simplex(n as usize)).unwrap();
            assert_eq!(p.r, AlgebraicNumber::from_rational(rat(n - 1, 2 * n)));
            assert_eq!(p.target, Signature::new(n as usize - 1, 0));
        }
        let t = spherical_radius(&DissimilarityMatrix::simplex(3)).unwrap();
        assert_eq!(t.a, AlgebraicNumber::from_rational(rat(2, 3)));
    }

    #[test]
    fn heptagon_negation_is_spherical() {
        let c7 = canonical_graph(&Graph::cycle(7));
        let cubic = IntPoly::from_i64s(&[-1, -2, 1, 1]);
        let lambda = isolate_roots(&cubic)[1].clone();
        let b = Branch::Plus.distance(&lambda).unwrap();
        let d = DissimilarityMatrix::relation(c7, Branch::Plus, b.clone()).unwrap();
        assert!(!is_spherical_in_embedding(&d).unwrap());
        let neg = DissimilarityMatrix::relation(c7, Branch::Minus, b.neg()).unwrap();
        let place = spherical_radius(&neg).unwrap();
        assert_eq!(place.target, Signature::new(2, 2));
        assert_eq!(place.a.sign(), Ordering::Greater);
        let pencil = GramPencil::new(&neg);
        let above = place.a.hi() + Rational::one();
        let below = place.a.lo() / Rational::from_integer(2.into());
        assert_eq!(pencil.signature_at(&above), Signature::new(3, 2));
        assert_eq!(pencil.signature_at(&below), Signature::new(2, 3));
    }

    #[test]
    fn one_edge_interval_subdivides_by_type() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let lo = AlgebraicNumber::from_int(0);
        let hi = AlgebraicNumber::from_rational(rat(1, 4));
        let pieces = region_types(&g, Branch::Plus, &lo, &hi).unwrap();
        assert!(!pieces.is_empty());
        for (region, t) in &pieces {
            if let BRegion::Interval { sample, .. } = region {
                let b = crate::arith::rational::parse_rational(sample).unwrap();
                assert_eq!(*t, classify_type(&one_edge(1, b)).unwrap());
            }
        }
    }
}
