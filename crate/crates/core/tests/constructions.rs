use std::time::Instant;

use pqdist::arith::{isolate_roots, AlgebraicNumber, IntPoly, Rational};
use pqdist::constructions::*;
use pqdist::embedding::{embedding_dimension, Branch, DissimilarityMatrix};
use pqdist::graph::Graph;
use pqdist::spectral::{RatMatrix, Signature};

fn two_four() -> std::collections::BTreeSet<Radical> {
    [Radical::int(2), Radical::int(4)].into_iter().collect()
}

#[test]
fn twentytwo_point_set_embeds_in_six_one() {
    let s = construct_22point();
    let d = DissimilarityMatrix::rational(s.rational_distance_matrix().unwrap()).unwrap();
    assert_eq!(embedding_dimension(&d), Signature::new(6, 1));
}

#[test]
fn family_sizes_distances_and_patterns() {
    let start = Instant::now();
    for n in 7..=12 {
        let s = construct_family_pq1(n).unwrap();
        assert_eq!(s.len(), family_pq1_size(n));
        assert_eq!(s.signature, Signature::new(n, 1));
        assert_eq!(s.distance_values().unwrap(), two_four(), "n = {n}");
        assert!(s.matches_pattern(family_pq1_adjacency(n), &Radical::int(4), &Radical::int(2)));
        let amb = construct_family_pq1_ambient(n).unwrap();
        assert_eq!(amb.distances_exact(), s.distances_exact());
        assert!(family_pq1_hyperplane_sums(n)
            .unwrap()
            .iter()
            .all(|x| *x == Radical::int(2)));
        let bound = pqdist::embedding::bound_sphere_q1(n as u64, 2) as usize;
        assert_eq!(s.len() + 1, bound);
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn family_embedding_dimensions() {
    for n in [7, 9, 10] {
        let s = construct_family_pq1(n).unwrap();
        let d = DissimilarityMatrix::rational(s.rational_distance_matrix().unwrap()).unwrap();
        assert_eq!(embedding_dimension(&d), Signature::new(n, 1), "n = {n}");
    }
}

#[test]
fn johnson_family_sizes_and_distances() {
    for p in 5..=10 {
        let s = construct_johnson_family(p).unwrap();
        assert_eq!(s.len(), 1 + p + p * (p - 1) / 2);
        assert_eq!(s.distance_values().unwrap(), two_four(), "p = {p}");
        assert!(s.matches_pattern(johnson_adjacency(p), &Radical::int(4), &Radical::int(2)));
    }
    let s = construct_johnson_family(5).unwrap();
    let d = DissimilarityMatrix::rational(s.rational_distance_matrix().unwrap()).unwrap();
    assert_eq!(embedding_dimension(&d), Signature::new(5, 0));
    for p in 7..=9 {
        let s = construct_johnson_family(p).unwrap();
        let d = DissimilarityMatrix::rational(s.rational_distance_matrix().unwrap()).unwrap();
        assert_eq!(embedding_dimension(&d), Signature::new(p, 1), "p = {p}");
    }
}

fn max_error(set: &PointSet, target: &RatMatrix) -> f64 {
    let d = float_distances(set);
    let mut worst: f64 = 0.0;
    for (i, row) in d.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - pqdist::arith::rational::to_f64(target.get(i, j))).abs());
        }
    }
    worst
}

#[test]
fn realize_simplex() {
    let d = DissimilarityMatrix::simplex(4);
    let s = realize(&d, 1e-12).unwrap();
    assert_eq!(s.signature, Signature::new(3, 0));
    assert!(max_error(&s, &d.to_rational().unwrap()) < 1e-12);
}

#[test]
fn realize_heptagon() {
    let cubic = IntPoly::from_i64s(&[-1, -2, 1, 1]);
    let lambda = isolate_roots(&cubic)[1].clone();
    let b = Branch::Plus.distance(&lambda).unwrap();
    let d = DissimilarityMatrix::relation(Graph::cycle(7), Branch::Plus, b).unwrap();
    let s = realize(&d, 1e-9).unwrap();
    assert_eq!(s.signature, Signature::new(2, 2));
    let fd = float_distances(&s);
    assert!((fd[0][1] - 1.0).abs() < 1e-9);
    assert!((fd[0][2] - d_b(&d)).abs() < 1e-9);
}

fn d_b(d: &DissimilarityMatrix) -> f64 {
    match d {
        DissimilarityMatrix::Relation(r) => r.b.to_f64(),
        DissimilarityMatrix::Rational(_) => unreachable!(),
    }
}

#[test]
fn realize_twentytwo_scaled() {
    let adj = johnson_adjacency(6);
    let g = Graph::from_edges(
        22,
        &(0..22)
            .flat_map(|i| (i + 1..22).map(move |j| (i, j)))
            .filter(|&(i, j)| adj(i, j))
            .collect::<Vec<_>>(),
    );
    let half = AlgebraicNumber::from_rational(Rational::new(1.into(), 2.into()));
    let d = DissimilarityMatrix::relation(g, Branch::Plus, half).unwrap();
    let s = realize(&d, 1e-9).unwrap();
    assert_eq!(s.signature, Signature::new(6, 1));
    let exact = construct_22point();
    let scaled = exact
        .rational_distance_matrix()
        .unwrap()
        .scale(&Rational::new(1.into(), 4.into()));
    assert!(max_error(&s, &scaled) < 1e-9);
}

#[test]
fn realize_reports_deviation() {
    let d = DissimilarityMatrix::simplex(5);
    match realize(&d, -1.0) {
        Err(ConstructionError::ToleranceExceeded { max_deviation, .. }) => {
            assert!(max_deviation >= 0.0)
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn exports() {
    let s = construct_family_pq1(7).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
    assert_eq!(v["size"], 35);
    assert!(v["points"][0][0].is_object() || v["points"][0][0].is_string());
    let csv = s.to_csv(12);
    assert_eq!(csv.lines().count(), 36);
    let r = realize(&DissimilarityMatrix::simplex(3), 1e-12).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert!(v["points"][0][0].as_str().unwrap().contains("0x"));
}
