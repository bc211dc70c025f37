mod common;

use common::{bijective, lambdas_2_1, largest, root, spherical};
use pqdist::arith::{alg_compare, AlgebraicNumber, Rational};
use pqdist::embedding::{
    principal_witness, scan_small_orders, Branch, DissimilarityMatrix, RepresentationType,
};
use pqdist::graph::{canonical_graph, Graph};
use pqdist::search::tables::{cells_up_to, Tier, LARGEST, LARGEST_SPHERICAL};
use pqdist::spectral::Signature;
use std::cmp::Ordering;

#[test]
fn largest_sets_small_tier() {
    for cell in cells_up_to(LARGEST, Tier::Small) {
        let r = largest(cell.p, cell.q);
        assert_eq!(r.cell, cell.label(), "({}, {})", cell.p, cell.q);
        assert_eq!(r.max_order, cell.size);
        assert!(!r.truncated);
    }
}

#[test]
fn one_one_has_infinitely_many_triples_and_no_four_point_set() {
    let r = largest(1, 1);
    assert!(r.infinite);
    assert_eq!(r.max_order, 3);
    assert!(!r.families.is_empty());
    assert!(r
        .families
        .iter()
        .all(|f| f.order == 3 && f.dimension == Signature::new(1, 1)));
    assert!(scan_small_orders(1, 1, 4, &[Branch::Plus, Branch::Minus]).is_empty());
    assert!(r.diagnostics.notes.iter().any(|n| n.contains("order 4")));
}

#[test]
fn spherical_small_tier_cells() {
    for (p, q) in [
        (2, 1),
        (3, 1),
        (3, 2),
        (4, 1),
        (2, 2),
        (1, 1),
        (2, 0),
        (3, 0),
        (4, 0),
        (5, 0),
    ] {
        let want = LARGEST_SPHERICAL
            .iter()
            .find(|c| (c.p, c.q) == (p, q))
            .unwrap();
        let r = spherical(p, q);
        assert_eq!(r.cell, want.label(), "({p}, {q})");
    }
}

#[test]
fn spherical_line_holds_no_two_distance_set() {
    let r = spherical(1, 0);
    assert_eq!(r.max_order, 0);
    assert!(r.configurations.is_empty() && r.families.is_empty());
}

#[test]
fn spherical_two_one_family_contains_single_edge_graph() {
    let r = spherical(2, 1);
    assert!(r.infinite);
    assert_eq!(r.max_order, 4);
    let edge = canonical_graph(&Graph::from_edges(4, &[(0, 1)]));
    let quarter = AlgebraicNumber::from_rational(Rational::new(1.into(), 4.into()));
    let zero = AlgebraicNumber::from_int(0);
    let hit = r.families.iter().any(|f| {
        let g = pqdist::graph::graph6_decode(&f.graph6).unwrap();
        canonical_graph(&g) == edge
            && f.branch == Branch::Plus
            && alg_compare(&f.b_low.value, &zero) != Ordering::Greater
            && alg_compare(&f.b_high.value, &quarter) != Ordering::Less
    });
    assert!(hit);
}

#[test]
fn spherical_four_one_excludes_one_type_three_graph() {
    let all = largest(4, 1);
    let sph = spherical(4, 1);
    assert_eq!(sph.diagnostics.excluded.len(), 1);
    let (g6, t) = &sph.diagnostics.excluded[0];
    assert_eq!(*t, RepresentationType(3));
    let winner = all.configurations.iter().find(|c| &c.graph6 == g6).unwrap();
    assert_eq!(winner.representation_type, RepresentationType(3));
    assert!(!winner.spherical);
    let kept: Vec<_> = all.configurations.iter().filter(|c| c.spherical).collect();
    assert_eq!(kept.len(), 1);
    assert_eq!(sph.configurations[0].graph6, kept[0].graph6);
}

#[test]
fn three_one_distance_is_golden() {
    let phi = root(&[-1, 1, 1], 1);
    let r = largest(3, 1);
    assert_eq!(r.configurations.len(), 3);
    for c in &r.configurations {
        assert_eq!(c.branch, Branch::Plus);
        assert_eq!(alg_compare(&c.lambda.value, &phi), Ordering::Equal);
    }
}

#[test]
fn two_two_distance_is_cubic_root() {
    let r = largest(2, 2);
    assert_eq!(r.configurations.len(), 1);
    let c = &r.configurations[0];
    assert_eq!(
        alg_compare(&c.lambda.value, &root(&[-1, -2, 1, 1], 1)),
        Ordering::Equal
    );
    assert_eq!(
        canonical_graph(&c.graph()),
        canonical_graph(&Graph::cycle(7))
    );
    assert_eq!(c.representation_type, RepresentationType(3));
    assert_eq!(c.negated_type, RepresentationType(2));
    assert!(spherical(2, 2).configurations[0].spherical);
}

#[test]
fn two_one_distances_match_eight_polynomials() {
    let r = largest(2, 1);
    let found: Vec<AlgebraicNumber> = r
        .configurations
        .iter()
        .map(|c| c.lambda.value.clone())
        .collect();
    assert!(bijective(&found, &lambdas_2_1()));
    assert!(r.configurations.iter().all(|c| c.branch == Branch::Plus));
    assert!(r
        .configurations
        .iter()
        .all(|c| c.representation_type == RepresentationType(1)));
}

#[test]
fn three_two_winners() {
    let r = largest(3, 2);
    let cubic = root(&[-1, -2, 1, 1], 1);
    let silver = root(&[-1, 2, 1], 1);
    let mut seen = Vec::new();
    for c in &r.configurations {
        let l = &c.lambda.value;
        let tag = match (c.branch, alg_compare(l, &cubic), alg_compare(l, &silver)) {
            (Branch::Plus, Ordering::Equal, _) => "plus-cubic",
            (Branch::Plus, _, Ordering::Equal) => "plus-silver",
            (Branch::Minus, Ordering::Equal, _) => "minus-cubic",
            _ => panic!("unexpected λ {l:?}"),
        };
        seen.push(tag);
    }
    seen.sort();
    assert_eq!(seen, ["minus-cubic", "plus-cubic", "plus-silver"]);
}

#[test]
fn four_one_distance_is_golden() {
    let phi = root(&[-1, 1, 1], 1);
    let r = largest(4, 1);
    assert!(r
        .configurations
        .iter()
        .all(|c| alg_compare(&c.lambda.value, &phi) == Ordering::Equal));
}

#[test]
fn principal_witness_for_every_small_winner() {
    for cell in cells_up_to(LARGEST, Tier::Small) {
        for c in &largest(cell.p, cell.q).configurations {
            let d = DissimilarityMatrix::relation(c.graph(), c.branch, c.b.value.clone()).unwrap();
            let idx = principal_witness(&d).expect("witness exists");
            assert_eq!(idx.len(), cell.p + cell.q);
        }
    }
}
