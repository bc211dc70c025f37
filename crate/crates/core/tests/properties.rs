use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use pqdist::arith::{AlgebraicNumber, Rational};
use pqdist::embedding::{
    classify_type, embedding_dimension, f_matrix, k_integrality, principal_witness,
    theorem33_signature, uniform_weights, Branch, DissimilarityMatrix, RelationSpectrum,
    RepresentationType,
};
use pqdist::graph::{generate_all, Graph};
use pqdist::spectral::{signature, Matrix, RatMatrix, Signature};
use pqdist::spherical::{spherical_radius, GramPencil};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn float_signature(m: &DMatrix<f64>, eps: f64) -> Signature {
    let e = m.clone().symmetric_eigen().eigenvalues;
    Signature::new(
        e.iter().filter(|&&x| x > eps).count(),
        e.iter().filter(|&&x| x < -eps).count(),
    )
}

fn to_float(m: &RatMatrix) -> DMatrix<f64> {
    let n = m.order();
    DMatrix::from_fn(n, n, |i, j| pqdist::arith::rational::to_f64(m.get(i, j)))
}

fn arb_symmetric(max: usize, zero_diagonal: bool) -> impl Strategy<Value = RatMatrix> {
    (1..=max).prop_flat_map(move |n| {
        proptest::collection::vec(-3i64..=3, n * (n + 1) / 2).prop_map(move |v| {
            let mut m = Matrix::zeros(n, n);
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    let x = if i == j && zero_diagonal {
                        Rational::zero()
                    } else {
                        rat(v[k], 1)
                    };
                    m.set(i, j, x.clone());
                    m.set(j, i, x);
                    k += 1;
                }
            }
            m
        })
    })
}

fn arb_graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        g.add_edge(i, j);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn relation_float(g: &Graph, a: f64, b: f64) -> DMatrix<f64> {
    let n = g.order();
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else if g.has_edge(i, j) {
            a
        } else {
            b
        }
    });
    let p = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    -(&p * d * &p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exact_signature_agrees_with_float_oracle(m in arb_symmetric(7, false)) {
        prop_assert_eq!(signature(&m), float_signature(&to_float(&m), 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gower_signature_is_independent_of_weights(
        m in arb_symmetric(7, true),
        w in proptest::collection::vec(-5i64..=5, 7),
    ) {
        let n = m.order();
        let mut l: Vec<Rational> = w[..n].iter().map(|&x| rat(x, 7)).collect();
        let s: Rational = l.iter().sum();
        l[n - 1] += Rational::one() - s;
        let base = signature(&f_matrix(&m, &uniform_weights(n)).unwrap());
        prop_assert_eq!(signature(&f_matrix(&m, &l).unwrap()), base);
    }

    #[test]
    fn principal_witness_exists(m in arb_symmetric(7, true)) {
        let d = DissimilarityMatrix::rational(m).unwrap();
        let dim = embedding_dimension(&d);
        let idx = principal_witness(&d).unwrap();
        prop_assert_eq!(idx.len(), dim.rank());
    }

    #[test]
    fn algebraic_dimension_agrees_with_float_oracle(g in arb_graph(3, 8), plus in any::<bool>(), pick in 0usize..16) {
        prop_assume!(!g.is_complete() && !g.is_edgeless());
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let spec = RelationSpectrum::of_graph(&g);
        let half = AlgebraicNumber::from_rational(rat(-1, 2));
        let lambdas: Vec<&AlgebraicNumber> = spec
            .roots
            .iter()
            .map(|(r, _)| r)
            .filter(|r| r.sign() != Ordering::Equal && **r > half)
            .collect();
        prop_assume!(!lambdas.is_empty());
        let b = branch.distance(lambdas[pick % lambdas.len()]).unwrap();
        let d = DissimilarityMatrix::relation(g, branch, b.clone()).unwrap();
        let oracle = float_signature(&relation_float(&g, branch.sign() as f64, b.to_f64()), 1e-9);
        prop_assert_eq!(embedding_dimension(&d), oracle);
    }

    #[test]
    fn negation_swaps_dimension(g in arb_graph(3, 8), num in 1i64..20) {
        prop_assume!(!g.is_complete() && !g.is_edgeless());
        let b = AlgebraicNumber::from_rational(rat(num, 21));
        let d = DissimilarityMatrix::relation(g, Branch::Plus, b.clone()).unwrap();
        let neg = DissimilarityMatrix::relation(g, Branch::Minus, b.neg()).unwrap();
        prop_assert_eq!(embedding_dimension(&neg), embedding_dimension(&d).swap());
    }
}

fn sample_distances(branch: Branch) -> [Rational; 3] {
    let s = rat(branch.sign(), 1);
    [rat(1, 3) * &s, rat(-1, 3) * &s, rat(1, 2) * &s]
}

fn relation_rational(g: &Graph, a: &Rational, b: &Rational) -> RatMatrix {
    let n = g.order();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Rational::zero()
        } else if g.has_edge(i, j) {
            a.clone()
        } else {
            b.clone()
        }
    })
}

#[test]
fn four_case_signature_formula_on_all_small_graphs() {
    let mut checked = 0;
    for n in 2..=7 {
        for g in generate_all(n) {
            if g.is_complete() || g.is_edgeless() {
                continue;
            }
            for branch in [Branch::Plus, Branch::Minus] {
                let a = rat(branch.sign(), 1);
                for b in sample_distances(branch) {
                    let m = relation_rational(&g, &a, &b);
                    let direct = signature(&f_matrix(&m, &uniform_weights(n)).unwrap());
                    assert_eq!(
                        theorem33_signature(&m),
                        direct,
                        "{} a={a} b={b}",
                        g.to_graph6()
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 7000);
}

/// `−D + sJ` at `a ± ε` gains one positive on one side and one negative on the other.
fn flips_around(pencil: &GramPencil, a: &Rational, target: Signature) -> bool {
    let eps = rat(1, 1 << 20);
    let below = pencil.signature_at(&(a - &eps));
    let above = pencil.signature_at(&(a + &eps));
    let plus = Signature::new(target.positives + 1, target.negatives);
    let minus = Signature::new(target.positives, target.negatives + 1);
    (below == plus && above == minus) || (below == minus && above == plus)
}

#[test]
fn type_two_iff_certified_sphere_on_small_graphs() {
    let mut spherical = 0;
    for n in 3..=6 {
        for g in generate_all(n) {
            if g.is_complete() || g.is_edgeless() {
                continue;
            }
            for branch in [Branch::Plus, Branch::Minus] {
                for b in sample_distances(branch) {
                    let d =
                        DissimilarityMatrix::relation(g, branch, AlgebraicNumber::from_rational(b))
                            .unwrap();
                    let t = classify_type(&d).unwrap();
                    match spherical_radius(&d) {
                        Ok(place) => {
                            assert_eq!(t, RepresentationType(2));
                            let a = place.a.as_rational().unwrap();
                            let pencil = GramPencil::new(&d);
                            assert_eq!(pencil.signature_at(&a), place.target);
                            assert_eq!(place.target, embedding_dimension(&d));
                            assert!(flips_around(&pencil, &a, place.target));
                            spherical += 1;
                        }
                        Err(_) => assert_ne!(t, RepresentationType(2)),
                    }
                }
            }
        }
    }
    assert!(spherical > 0);
}

#[test]
fn integrality_values_for_one_and_half() {
    let k = k_integrality(&[rat(1, 1), rat(1, 2)]).unwrap();
    assert_eq!(k, vec![rat(-1, 1), rat(2, 1)]);
}
