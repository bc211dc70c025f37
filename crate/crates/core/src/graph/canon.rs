use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::graph6::{graph6_decode, graph6_encode};
use super::{Graph, GraphError, MAX_ORDER};

/// graph6 bytes of the canonically relabeled graph; equal iff isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn graph(&self) -> Graph {
        graph6_decode(&self.0).expect("canonical keys hold valid graph6")
    }

    pub fn from_graph6(s: &str) -> Result<Self, GraphError> {
        Ok(canonical_form(&graph6_decode(s)?))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({})", self.0)
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalKey::from_graph6(&s).map_err(serde::de::Error::custom)
    }
}

/// Result of canonical labeling.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// The canonically relabeled graph.
    pub canon: Graph,
    /// `label[v]` is the canonical label of vertex `v`.
    pub label: Vec<usize>,
    /// Automorphism generators found during the search (vertex maps).
    pub generators: Vec<Vec<u8>>,
}

impl Labeling {
    pub fn key(&self) -> CanonicalKey {
        CanonicalKey(graph6_encode(&self.canon))
    }

    /// Vertex orbits of the automorphism group generated by `generators`.
    pub fn orbits(&self) -> Vec<usize> {
        orbits(
            self.label.len(),
            self.generators.iter().map(|g| g.as_slice()),
        )
    }
}

type Code = [u32; MAX_ORDER];

struct Leaf {
    code: Code,
    perm: Vec<u8>,
    path: Vec<u8>,
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<u8>>,
}

const CONTINUE: usize = usize::MAX;

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Equitable refinement: split cells by neighbour counts into earlier cells until stable.
fn refine(g: &Graph, cells: &mut Vec<u32>) {
    let mut s = 0;
    while s < cells.len() {
        let splitter = cells[s];
        let mut changed = false;
        let mut next = Vec::with_capacity(g.order());
        for &cell in cells.iter() {
            if cell.count_ones() == 1 {
                next.push(cell);
                continue;
            }
            let mut by_count = [0u32; MAX_ORDER + 1];
            let mut lo = MAX_ORDER;
            let mut hi = 0;
            for v in bits(cell) {
                let c = (g.row(v) & splitter).count_ones() as usize;
                by_count[c] |= 1 << v;
                lo = lo.min(c);
                hi = hi.max(c);
            }
            if lo == hi {
                next.push(cell);
                continue;
            }
            changed = true;
            next.extend(by_count[lo..=hi].iter().copied().filter(|&m| m != 0));
        }
        if changed {
            *cells = next;
            s = 0;
        } else {
            s += 1;
        }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn orbits<'a>(n: usize, gens: impl Iterator<Item = &'a [u8]>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for g in gens {
        for (v, &w) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

impl Search<'_> {
    fn leaf(&mut self, cells: &[u32], path: &[u8]) -> usize {
        let perm: Vec<u8> = cells.iter().map(|c| c.trailing_zeros() as u8).collect();
        let mut pos = [0u8; MAX_ORDER];
        for (i, &v) in perm.iter().enumerate() {
            pos[v as usize] = i as u8;
        }
        let mut code = [0u32; MAX_ORDER];
        for (i, &v) in perm.iter().enumerate() {
            let mut out = 0u32;
            for u in bits(self.g.row(v as usize)) {
                out |= 1 << pos[u];
            }
            code[i] = out;
        }
        if self.first.is_none() {
            self.best = Some(Leaf {
                code,
                perm: perm.clone(),
                path: path.to_vec(),
            });
            self.first = Some(Leaf {
                code,
                perm,
                path: path.to_vec(),
            });
            return CONTINUE;
        }
        let n = self.n;
        let matched = [self.first.as_ref().unwrap(), self.best.as_ref().unwrap()]
            .into_iter()
            .find(|r| r.code[..n] == code[..n])
            .map(|r| {
                let mut gamma = vec![0u8; n];
                for i in 0..n {
                    gamma[r.perm[i] as usize] = perm[i];
                }
                let common = r.path.iter().zip(path).take_while(|(a, b)| a == b).count();
                (gamma, common)
            });
        if let Some((gamma, common)) = matched {
            self.gens.push(gamma);
            return common;
        }
        if code[..self.n] > self.best.as_ref().unwrap().code[..self.n] {
            self.best = Some(Leaf {
                code,
                perm,
                path: path.to_vec(),
            });
        }
        CONTINUE
    }

    fn visit(&mut self, cells: Vec<u32>, path: &mut Vec<u8>) -> usize {
        if cells.len() == self.n {
            return self.leaf(&cells, path);
        }
        let t = cells.iter().position(|c| c.count_ones() > 1).unwrap();
        let target = cells[t];
        let level = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for v in bits(target) {
            if !explored.is_empty() {
                let fixing = self
                    .gens
                    .iter()
                    .filter(|g| path.iter().all(|&p| g[p as usize] == p))
                    .map(|g| g.as_slice());
                let orb = orbits(self.n, fixing);
                if explored.iter().any(|&w| orb[w] == orb[v]) {
                    continue;
                }
            }
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..t]);
            next.push(1 << v);
            next.push(target & !(1 << v));
            next.extend_from_slice(&cells[t + 1..]);
            refine(self.g, &mut next);
            path.push(v as u8);
            let r = self.visit(next, path);
            path.pop();
            explored.push(v);
            if r < level {
                return r;
            }
        }
        CONTINUE
    }
}

pub fn canonical_labeling(g: &Graph) -> Labeling {
    let n = g.order();
    if n == 0 {
        return Labeling {
            canon: *g,
            label: Vec::new(),
            generators: Vec::new(),
        };
    }
    let mut search = Search {
        g,
        n,
        first: None,
        best: None,
        gens: Vec::new(),
    };
    let mut cells = vec![g.full_mask()];
    refine(g, &mut cells);
    search.visit(cells, &mut Vec::new());
    let best = search.best.unwrap();
    let mut canon = Graph::empty(n);
    let mut label = vec![0usize; n];
    for (i, &v) in best.perm.iter().enumerate() {
        label[v as usize] = i;
    }
    for (i, &row) in best.code[..n].iter().enumerate() {
        for u in bits(row) {
            if u > i {
                canon.add_edge(i, u);
            }
        }
    }
    Labeling {
        canon,
        label,
        generators: search.gens,
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalKey {
    canonical_labeling(g).key()
}

/// The canonically relabeled graph; equal iff isomorphic.
pub fn canonical_graph(g: &Graph) -> Graph {
    canonical_labeling(g).canon
}
