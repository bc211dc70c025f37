//! Simple graphs on at most 32 vertices.

pub mod canon;
pub mod generate;
pub mod graph6;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::spectral::IntMatrix;

pub use canon::{canonical_form, canonical_graph, canonical_labeling, CanonicalKey};
pub use generate::{extensions, generate_all, generate_bfs};
pub use graph6::{graph6_decode, graph6_encode};

pub const MAX_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {0} out of range for order {1}")]
    VertexOutOfRange(usize, usize),
    #[error("order {0} outside 1..=32")]
    BadOrder(usize),
    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),
}

/// Simple undirected graph with bitset adjacency rows.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: [u32; MAX_ORDER],
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "order exceeds {MAX_ORDER}");
        Graph {
            n,
            rows: [0; MAX_ORDER],
        }
    }

    pub fn complete(n: usize) -> Self {
        Self::empty(n).complement()
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// From a 0/1 adjacency matrix given as rows of digits.
    pub fn from_adjacency_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, GraphError> {
        let n = rows.len();
        if n == 0 || n > MAX_ORDER {
            return Err(GraphError::BadOrder(n));
        }
        let mut g = Self::empty(n);
        for (i, r) in rows.iter().enumerate() {
            let digits: Vec<char> = r.as_ref().chars().filter(|c| !c.is_whitespace()).collect();
            if digits.len() != n {
                return Err(GraphError::BadOrder(digits.len()));
            }
            for (j, c) in digits.iter().enumerate() {
                if *c == '1' && i != j {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows[..self.n]
    }

    pub fn row(&self, v: usize) -> u32 {
        self.rows[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "invalid edge");
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows()
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.edge_count() == 0
    }

    pub fn full_mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn complement(&self) -> Self {
        let mut g = *self;
        let full = self.full_mask();
        for v in 0..self.n {
            g.rows[v] = !self.rows[v] & full & !(1 << v);
        }
        g
    }

    /// Induced subgraph on all vertices except `v`; higher labels shift down.
    pub fn delete_vertex(&self, v: usize) -> Result<Self, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if self.n < 2 {
            return Err(GraphError::BadOrder(self.n));
        }
        let low = (1u32 << v) - 1;
        let mut g = Self::empty(self.n - 1);
        let mut k = 0;
        for u in 0..self.n {
            if u == v {
                continue;
            }
            let r = self.rows[u];
            g.rows[k] = (r & low) | ((r >> 1) & !low);
            k += 1;
        }
        Ok(g)
    }

    /// Appends a vertex adjacent to the vertices in `mask`.
    pub fn add_vertex(&self, mask: u32) -> Self {
        assert!(self.n < MAX_ORDER, "order exceeds {MAX_ORDER}");
        let mut g = *self;
        let v = self.n;
        g.n += 1;
        g.rows[v] = mask & self.full_mask();
        for u in 0..self.n {
            if mask >> u & 1 == 1 {
                g.rows[u] |= 1 << v;
            }
        }
        g
    }

    /// Relabels so that vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut g = Self::empty(self.n);
        for u in 0..self.n {
            let mut r = self.rows[u];
            let mut out = 0u32;
            while r != 0 {
                let w = r.trailing_zeros() as usize;
                r &= r - 1;
                out |= 1 << perm[w];
            }
            g.rows[perm[u]] = out;
        }
        g
    }

    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &w) in vertices.iter().enumerate() {
                if self.has_edge(u, w) {
                    g.rows[i] |= 1 << j;
                }
            }
        }
        g
    }

    pub fn degree_sequence(&self) -> Vec<u8> {
        let mut d: Vec<u8> = (0..self.n).map(|v| self.degree(v) as u8).collect();
        d.sort_unstable();
        d
    }

    /// Adjacency matrix `A1` (edges).
    pub fn adjacency(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |i, j| {
            if self.has_edge(i, j) {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Adjacency matrix of the complement `A2 = J − I − A1` (non-edges).
    pub fn non_adjacency(&self) -> IntMatrix {
        self.complement().adjacency()
    }

    pub fn adjacency_i64(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_edge(i, j) as i64).collect())
            .collect()
    }

    pub fn to_graph6(&self) -> String {
        graph6_encode(self)
    }

    /// Graphviz rendering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for v in 0..self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    s.push_str(&format!("  {u} -- {v};\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Ord for Graph {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.n.cmp(&o.n).then_with(|| self.rows().cmp(o.rows()))
    }
}

impl PartialOrd for Graph {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({})", graph6_encode(self))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", graph6_encode(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surgery() {
        let c5 = Graph::cycle(5);
        for v in 0..5 {
            let d = c5.delete_vertex(v).unwrap();
            assert_eq!(canonical_form(&d), canonical_form(&Graph::path(4)));
        }
        let k4 = Graph::complete(4);
        assert_eq!(k4.delete_vertex(2).unwrap(), Graph::complete(3));
        assert!(k4.delete_vertex(4).is_err());
        assert_eq!(canonical_form(&c5.complement()), canonical_form(&c5));
        let g = Graph::path(3).add_vertex(0b101);
        assert_eq!(g, Graph::cycle(4));
        assert_eq!(g.delete_vertex(3).unwrap(), Graph::path(3));
    }

    #[test]
    fn relabeling() {
        let p = Graph::path(4);
        let q = p.permute(&[3, 1, 0, 2]);
        assert_eq!(q.edge_count(), 3);
        assert!(q.has_edge(3, 1) && q.has_edge(1, 0) && q.has_edge(0, 2));
        assert_eq!(p.induced(&[0, 1, 2]), Graph::path(3));
    }

    #[test]
    fn adjacency_rows() {
        let g = Graph::from_adjacency_rows(&["011", "101", "110"]).unwrap();
        assert_eq!(g, Graph::complete(3));
        assert!(Graph::from_adjacency_rows(&["01", "1"]).is_err());
    }
}
