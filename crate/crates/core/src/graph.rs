//! Labeled simple graphs on at most 64 vertices, stored as one adjacency
//! bit-mask per vertex, plus the vertex-set algebra everything else is
//! built on.

use std::fmt;

use crate::error::GraphError;

/// Largest supported vertex count: one machine word per adjacency row.
pub const MAX_VERTICES: usize = 64;

#[inline(always)]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask of all labels strictly greater than `v`.
#[inline(always)]
pub(crate) const fn above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        u64::MAX << (v + 1)
    }
}

/// Mask with the low `n` bits set.
#[inline]
pub const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A set of vertex labels, interpreted against some graph's label space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        VertexSet(low_mask(n))
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(bit(v))
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        VertexSet(vs.into_iter().fold(0, |acc, v| acc | bit(v)))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & bit(v) != 0
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= bit(v);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !bit(v);
    }

    #[inline]
    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest label in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Vertices;

    fn into_iter(self) -> Vertices {
        self.iter()
    }
}

impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.to_vec(), s)
    }
}

impl<'de> serde::Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = serde::Deserialize::deserialize(d)?;
        if let Some(x) = v.iter().find(|&&x| x >= 64) {
            return Err(serde::de::Error::custom(format!("vertex {x} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

/// Ascending iterator over the labels of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Vertices {}

/// A labeled simple graph with vertex set `0..n`, `n <= 64`.
///
/// Row `v` of the adjacency holds the neighbours of `v`. Rows are symmetric,
/// have bit `v` clear, and carry no bits at or above `n`; every constructor
/// maintains this.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: [u64; MAX_VERTICES],
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(
            n <= MAX_VERTICES,
            "graph has {n} vertices, cap is {MAX_VERTICES}"
        );
        Graph {
            n,
            adj: [0; MAX_VERTICES],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        let all = low_mask(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        g
    }

    /// Builds a graph from an edge list, rejecting loops and out-of-range ends.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw rows, checking every representation invariant.
    pub fn from_rows(rows: &[u64]) -> Result<Self, GraphError> {
        let n = rows.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut g = Graph::empty(n);
        g.adj[..n].copy_from_slice(rows);
        g.check_invariants()?;
        Ok(g)
    }

    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let all = low_mask(self.n);
        for v in 0..self.n {
            let row = self.adj[v];
            if row & bit(v) != 0 {
                return Err(GraphError::SelfLoop(v));
            }
            if row & !all != 0 {
                return Err(GraphError::VertexOutOfRange {
                    vertex: 63 - row.leading_zeros() as usize,
                    n: self.n,
                });
            }
            for u in VertexSet(row) {
                if self.adj[u] & bit(v) == 0 {
                    return Err(GraphError::Asymmetric(u, v));
                }
            }
        }
        if self.adj[self.n..].iter().any(|&r| r != 0) {
            return Err(GraphError::VertexOutOfRange {
                vertex: self.n,
                n: self.n,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Neighbourhood of `v` as a set.
    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj[..self.n]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(
            u != v && u < self.n && v < self.n,
            "bad edge {u}-{v} for n={}",
            self.n
        );
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        assert!(
            u != v && u < self.n && v < self.n,
            "bad pair {u}-{v} for n={}",
            self.n
        );
        self.adj[u] ^= bit(v);
        self.adj[v] ^= bit(u);
    }

    /// Adds `k` isolated vertices, returning the label of the first one.
    pub fn add_vertices(&mut self, k: usize) -> usize {
        assert!(
            self.n + k <= MAX_VERTICES,
            "graph would exceed {MAX_VERTICES} vertices"
        );
        let first = self.n;
        self.n += k;
        first
    }

    pub fn edge_count(&self) -> usize {
        self.rows()
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !low_mask(u + 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        let all = low_mask(self.n);
        for v in 0..self.n {
            g.adj[v] = !self.adj[v] & all & !bit(v);
        }
        g
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Disjoint union: `other` is placed on labels `self.n()..`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        let off = g.add_vertices(other.n);
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off);
        }
        g
    }

    /// Number of edges of `G[w]`, modulo 2.
    #[inline]
    pub fn edge_parity(&self, w: VertexSet) -> u32 {
        (self.degree_sum_in(w) / 2) as u32 & 1
    }

    /// Number of edges of `G[w]`.
    pub fn edges_in(&self, w: VertexSet) -> usize {
        self.degree_sum_in(w) / 2
    }

    #[inline]
    fn degree_sum_in(&self, w: VertexSet) -> usize {
        w.iter()
            .map(|v| (self.adj[v] & w.0).count_ones() as usize)
            .sum()
    }

    /// Degree of `v` in `G[w]`. Panics if `v` is not in `w`.
    #[inline]
    pub fn degree_in(&self, w: VertexSet, v: usize) -> usize {
        assert!(w.contains(v), "vertex {v} is not in the window {w:?}");
        (self.adj[v] & w.0).count_ones() as usize
    }

    /// Number of edges between `a` and `b` (assumed disjoint).
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> usize {
        a.iter()
            .map(|v| (self.adj[v] & b.0).count_ones() as usize)
            .sum()
    }

    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| self.adj[v] & s.0 == 0)
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| (self.adj[v] | bit(v)) & s.0 == s.0)
    }

    /// Every vertex of `a` is adjacent to every vertex of `b`.
    pub fn is_complete_to(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().all(|v| self.adj[v] & b.0 == b.0)
    }

    /// No edge runs between `a` and `b`.
    pub fn sends_no_edges(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().all(|v| self.adj[v] & b.0 == 0)
    }

    /// Parity vector of all degrees, bit `v` set iff `deg(v)` is odd.
    pub fn degree_parities(&self) -> u64 {
        (0..self.n).fold(0, |acc, v| {
            acc | (((self.adj[v].count_ones() & 1) as u64) << v)
        })
    }

    /// Induced subgraph on `w`, relabelled to `0..|w|` in label order.
    pub fn induced(&self, w: VertexSet) -> Graph {
        let labels = w.to_vec();
        let mut g = Graph::empty(labels.len());
        for (i, &u) in labels.iter().enumerate() {
            for (j, &v) in labels.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// True iff `G` has a clique on `k` vertices.
    pub fn has_clique_of_size(&self, k: usize) -> bool {
        crate::clique::has_clique_of_size(self, k)
    }

    pub fn clique_number(&self) -> usize {
        crate::clique::clique_number(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, [", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        f.write_str("])")
    }
}

/// Small named graphs used across tests and rigs.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle")
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star")
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn perfect_matching(pairs: usize) -> Graph {
        Graph::from_edges(2 * pairs, (0..pairs).map(|i| (2 * i, 2 * i + 1))).expect("matching")
    }

    /// Two disjoint copies of `K_{5,5}`: parts `0..5 | 5..10` and `10..15 | 15..20`.
    pub fn gadget_f() -> Graph {
        complete_bipartite(5, 5).disjoint_union(&complete_bipartite(5, 5))
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn edge_parity_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.edge_parity(k4.vertices()), 0);
        for drop in 0..4 {
            let mut w = k4.vertices();
            w.remove(drop);
            assert_eq!(k4.edge_parity(w), 1);
        }
        assert_eq!(path(5).edge_parity(VertexSet::EMPTY), 0);
    }

    #[test]
    fn independence_examples() {
        let c4 = cycle(4);
        assert!(c4.is_independent(VertexSet::from_vertices([0, 2])));
        let k4 = Graph::complete(4);
        assert!(!k4.is_independent(VertexSet::from_vertices([1, 3])));
        assert!(!k4.is_independent(k4.vertices()));
        assert!(k4.is_independent(VertexSet::singleton(2)));
        assert!(k4.is_independent(VertexSet::EMPTY));
    }

    #[test]
    fn degree_in_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.degree_in(k4.vertices(), 0), 3);
        assert_eq!(k4.degree_in(VertexSet::from_vertices([0, 1]), 0), 1);
        let e = Graph::empty(5);
        assert_eq!(e.degree_in(VertexSet::from_vertices([1, 3]), 3), 0);
    }

    #[test]
    #[should_panic(expected = "not in the window")]
    fn degree_in_outside_window_panics() {
        let k4 = Graph::complete(4);
        k4.degree_in(VertexSet::from_vertices([1, 2]), 0);
    }

    #[test]
    fn from_rows_rejects_broken_rows() {
        assert!(matches!(
            Graph::from_rows(&[0b10, 0b00]),
            Err(GraphError::Asymmetric(..))
        ));
        assert!(matches!(
            Graph::from_rows(&[0b1]),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(Graph::from_rows(&[0b100, 0]).is_err());
        assert_eq!(Graph::from_rows(&[0b10, 0b01]).unwrap(), path(2));
    }

    #[test]
    fn complement_and_union() {
        let g = path(4);
        assert_eq!(g.complement().edge_count(), 3);
        assert_eq!(g.complement().complement(), g);
        let u = g.disjoint_union(&Graph::complete(3));
        assert_eq!(u.n(), 7);
        assert_eq!(u.edge_count(), 6);
        assert!(u.has_edge(4, 6));
    }

    #[test]
    fn gadget_shape() {
        let f = gadget_f();
        assert_eq!(f.n(), 20);
        assert_eq!(f.edge_count(), 50);
        assert!(f.is_independent(VertexSet::from_vertices(0..5)));
        assert!(f.sends_no_edges(
            VertexSet::from_vertices(0..10),
            VertexSet::from_vertices(10..20)
        ));
    }

    #[test]
    fn edges_in_sixty_four_vertex_graph() {
        let k = Graph::complete(64);
        assert_eq!(k.edge_count(), 64 * 63 / 2);
        assert_eq!(k.degree(63), 63);
        k.check_invariants().unwrap();
    }
}
