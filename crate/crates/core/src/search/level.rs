//! Quasi-representable graph levels for a fixed `λ`.

use std::sync::Mutex;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use super::{
    bucket_by_lambda, lemma42_candidates, Candidate, LambdaKey, SearchError, MAX_BASE_ORDER,
};
use crate::embedding::{embedding_dimension, Branch, DissimilarityMatrix};
use crate::graph::generate::par_for_each_graph;
use crate::graph::{canonical_graph, canonical_labeling, Graph};
use crate::spectral::Signature;

/// Graphs of one order that are quasi-representable at `key`, sorted, with the `L'` flags.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchLevel {
    pub n: usize,
    pub key: LambdaKey,
    pub graphs: Vec<Graph>,
    /// `proper[i]` marks membership of `graphs[i]` in `L'`.
    pub proper: Vec<bool>,
}

impl SearchLevel {
    pub fn new(n: usize, key: LambdaKey, mut entries: Vec<(Graph, bool)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        entries.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 |= a.1;
                true
            } else {
                false
            }
        });
        let (graphs, proper) = entries.into_iter().unzip();
        SearchLevel {
            n,
            key,
            graphs,
            proper,
        }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn lprime(&self) -> impl Iterator<Item = &Graph> {
        self.graphs
            .iter()
            .zip(&self.proper)
            .filter(|(_, &p)| p)
            .map(|(g, _)| g)
    }

    pub fn lprime_len(&self) -> usize {
        self.proper.iter().filter(|&&p| p).count()
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.graphs.binary_search(g).is_ok()
    }
}

/// Every base level of a cell, plus graphs admitted only at `λ = −1/2`.
#[derive(Clone, Debug)]
pub struct BaseLevels {
    pub levels: Vec<SearchLevel>,
    pub boundary: Vec<(Graph, Branch)>,
}

/// Buckets all graphs of order `p + q + 3` by their admissible `λ` on each branch.
pub fn build_base_levels(
    p: usize,
    q: usize,
    branches: &[Branch],
) -> Result<BaseLevels, SearchError> {
    let n = p + q + 3;
    if n > MAX_BASE_ORDER {
        return Err(SearchError::TierExceeded { p, q, order: n });
    }
    let found: Mutex<Vec<(Graph, Branch, Candidate)>> = Mutex::new(Vec::new());
    let boundary: Mutex<Vec<(Graph, Branch)>> = Mutex::new(Vec::new());
    par_for_each_graph(n, |g| {
        if g.is_complete() || g.is_edgeless() {
            return;
        }
        let mut local = Vec::new();
        let mut edge = Vec::new();
        for &branch in branches {
            let c = lemma42_candidates(g, p, q, branch).expect("non-degenerate graph");
            if c.boundary && c.admissible.is_empty() {
                edge.push((*g, branch));
            }
            local.extend(c.admissible.into_iter().map(|c| (*g, branch, c)));
        }
        if !local.is_empty() {
            found.lock().unwrap().extend(local);
        }
        if !edge.is_empty() {
            boundary.lock().unwrap().extend(edge);
        }
    });
    let found = found.into_inner().unwrap();
    let mut boundary = boundary.into_inner().unwrap();
    boundary.sort();
    let target = Signature::new(p, q);
    let mut levels = Vec::new();
    for &branch in branches {
        let items: Vec<(Graph, Candidate)> = found
            .iter()
            .filter(|x| x.1 == branch)
            .map(|x| (x.0, x.2.clone()))
            .collect();
        for (key, members) in bucket_by_lambda(branch, items) {
            let entries = members
                .into_iter()
                .map(|(g, dim)| (g, dim == target))
                .collect();
            levels.push(SearchLevel::new(n, key, entries));
        }
    }
    Ok(BaseLevels { levels, boundary })
}

/// Base levels of a single branch in increasing `λ`.
pub fn build_base_level(
    p: usize,
    q: usize,
    branch: Branch,
) -> Result<Vec<SearchLevel>, SearchError> {
    Ok(build_base_levels(p, q, &[branch])?.levels)
}

fn mix(d: u32) -> u64 {
    let mut z = (d as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-independent hash of the degree multiset.
fn degree_hash(g: &Graph) -> u64 {
    (0..g.order()).fold(0u64, |h, v| h.wrapping_add(mix(g.row(v).count_ones())))
}

const CHUNK: u64 = 1 << 12;

/// The next level: one-vertex extensions all of whose vertex-deleted subgraphs lie in `level`.
///
/// Each extension is generated from a unique parent by canonical augmentation, and enters
/// `L'` when some vertex-deleted subgraph is in `L'`.
pub fn extend_level(level: &SearchLevel) -> SearchLevel {
    let n = level.n;
    let next = n + 1;
    let members: FxHashMap<Graph, bool> = level
        .graphs
        .iter()
        .copied()
        .zip(level.proper.iter().copied())
        .collect();
    let hashes: FxHashSet<u64> = level.graphs.iter().map(degree_hash).collect();
    let total = 1u64 << n;
    let tasks: Vec<(usize, u64)> = (0..level.graphs.len())
        .flat_map(|i| (0..total).step_by(CHUNK as usize).map(move |s| (i, s)))
        .collect();
    let found: Vec<(Graph, bool)> = tasks
        .par_iter()
        .flat_map_iter(|&(i, start)| {
            let g = level.graphs[i];
            let g_proper = level.proper[i];
            let mut out = Vec::new();
            let mut deg = [0u32; 32];
            for mask in start..(start + CHUNK).min(total) {
                let h = g.add_vertex(mask as u32);
                for (v, d) in deg.iter_mut().enumerate().take(next) {
                    *d = h.row(v).count_ones();
                }
                let full: u64 = deg[..next]
                    .iter()
                    .map(|&d| mix(d))
                    .fold(0, u64::wrapping_add);
                let ok = (0..n).all(|u| {
                    let row = h.row(u);
                    let mut s = full.wrapping_sub(mix(deg[u]));
                    let mut r = row;
                    while r != 0 {
                        let w = r.trailing_zeros() as usize;
                        r &= r - 1;
                        s = s.wrapping_sub(mix(deg[w])).wrapping_add(mix(deg[w] - 1));
                    }
                    hashes.contains(&s)
                });
                if !ok {
                    continue;
                }
                let lab = canonical_labeling(&h);
                let last = lab
                    .label
                    .iter()
                    .position(|&l| l == n)
                    .expect("labels are a permutation");
                if last != n && canonical_graph(&h.delete_vertex(last).expect("in range")) != g {
                    continue;
                }
                let mut proper = g_proper;
                let mut all_in = true;
                for u in 0..n {
                    if u == last {
                        continue;
                    }
                    match members.get(&canonical_graph(&h.delete_vertex(u).expect("in range"))) {
                        Some(&pr) => proper |= pr,
                        None => {
                            all_in = false;
                            break;
                        }
                    }
                }
                if all_in {
                    out.push((lab.canon, proper));
                }
            }
            out
        })
        .collect();
    SearchLevel::new(next, level.key.clone(), found)
}

/// Result of the final exact check of a quasi-representable graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub dimension: Signature,
    pub representable: bool,
    pub proper: bool,
}

/// Embedding dimension of `a·A1 + b·A2` at `key` compared against the cell `(p, q)`.
pub fn verify_representable(
    g: &Graph,
    key: &LambdaKey,
    p: usize,
    q: usize,
) -> Result<Verification, SearchError> {
    if g.is_complete() || g.is_edgeless() {
        return Err(SearchError::Degenerate);
    }
    let d = DissimilarityMatrix::relation(*g, key.branch, key.b())?;
    let dimension = embedding_dimension(&d);
    let representable = dimension.positives <= p && dimension.negatives <= q;
    Ok(Verification {
        dimension,
        representable,
        proper: dimension == Signature::new(p, q),
    })
}
