use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::canon::{canonical_form, canonical_labeling, CanonicalKey};
use super::Graph;

/// All `2^n` one-vertex extensions of `g`, the new vertex attached to each subset.
pub fn extensions(g: &Graph) -> impl Iterator<Item = Graph> + '_ {
    (0u64..1u64 << g.order()).map(move |mask| g.add_vertex(mask as u32))
}

/// Canonical children of a canonical graph under canonical augmentation:
/// accept `H = G + v` iff deleting the canonically last vertex of `H` gives `G`.
pub fn children(g: &Graph) -> Vec<Graph> {
    let parent = canonical_form(g);
    let n = g.order();
    let mut seen = FxHashSet::default();
    let mut out = Vec::new();
    for h in extensions(g) {
        let lab = canonical_labeling(&h);
        let last = lab.label.iter().position(|&l| l == n).unwrap();
        let accept = last == n || canonical_form(&h.delete_vertex(last).unwrap()) == parent;
        if accept && seen.insert(lab.key()) {
            out.push(lab.canon);
        }
    }
    out
}

/// One canonical representative per isomorphism class of order `n`, sorted by key.
pub fn generate_all(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    let mut level = vec![Graph::empty(1)];
    for _ in 1..n {
        level = level.par_iter().flat_map_iter(children).collect();
    }
    let mut keyed: Vec<(CanonicalKey, Graph)> = level
        .into_par_iter()
        .map(|g| (canonical_form(&g), g))
        .collect();
    keyed.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, g)| g).collect()
}

/// Visits every isomorphism class of order `n` in parallel without storing the last level.
pub fn par_for_each_graph(n: usize, f: impl Fn(&Graph) + Sync) {
    if n == 1 {
        f(&Graph::empty(1));
        return;
    }
    let parents = generate_all(n - 1);
    parents.par_iter().for_each(|p| {
        for c in children(p) {
            f(&c);
        }
    });
}

/// Independent strategy: breadth-first extension with global deduplication.
pub fn generate_bfs(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    let mut level: Vec<Graph> = vec![Graph::empty(1)];
    for _ in 1..n {
        let keys: FxHashSet<CanonicalKey> = level
            .par_iter()
            .flat_map_iter(|g| {
                extensions(g)
                    .map(|h| canonical_form(&h))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut keys: Vec<CanonicalKey> = keys.into_iter().collect();
        keys.sort_unstable();
        level = keys.iter().map(|k| k.graph()).collect();
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| generate_all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
        assert_eq!(generate_bfs(5).len(), 34);
    }

    #[test]
    fn extension_counts() {
        assert_eq!(extensions(&Graph::empty(1)).count(), 2);
        let c5 = Graph::cycle(5);
        assert_eq!(extensions(&c5).count(), 32);
        let distinct: FxHashSet<CanonicalKey> =
            extensions(&c5).map(|h| canonical_form(&h)).collect();
        assert_eq!(distinct.len(), 8);
    }
}
