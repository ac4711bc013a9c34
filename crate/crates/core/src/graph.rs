//! Packed bit-row adjacency for simple undirected graphs.
//!
//! Every host graph in the crate (red or blue side of a colouring, bipartite
//! hosts of the embedders, prefix graphs of the Ramsey search) goes through
//! [`Graph`]. Rows are `words` 64-bit words long, so neighbourhood scans and
//! degree counts cost `O(N / 64)`.

use std::fmt;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A fixed-size set of vertices `0..capacity` stored as packed words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            bits: vec![0; words_for(capacity)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for v in 0..capacity {
            s.insert(v);
        }
        s
    }

    pub fn from_iter_with_capacity<I: IntoIterator<Item = usize>>(capacity: usize, it: I) -> Self {
        let mut s = Self::new(capacity);
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.bits[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.bits[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        (v >> 6) < self.bits.len() && self.bits[v >> 6] >> (v & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= !*b;
        }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple undirected graph on `0..n` with packed adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            rows: vec![0; words * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
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

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + (v >> 6)] >> (v & 63) & 1 == 1
    }

    /// Adds `uv`; loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u * self.words + (v >> 6)] |= 1u64 << (v & 63);
        self.rows[v * self.words + (u >> 6)] |= 1u64 << (u & 63);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + (v >> 6)] &= !(1u64 << (v & 63));
        self.rows[v * self.words + (u >> 6)] &= !(1u64 << (u & 63));
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.row(v)
            .iter()
            .zip(set.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    pub fn neighbour_set(&self, v: usize) -> VertexSet {
        VertexSet {
            bits: self.row(v).to_vec(),
        }
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbours(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Complement on the same vertex set, without loops.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Induced subgraph on `vertices` (relabelled `0..vertices.len()` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected component label for every vertex, labels in order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for v in self.neighbours(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Proper 2-colouring of every component, or `None` if some component has an odd cycle.
    pub fn two_colouring(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        let mut stack = Vec::new();
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for v in self.neighbours(u) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        stack.push(v);
                    } else if side[v] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    /// Twin classes: `u` and `v` share a class when `N(u) \ {v} = N(v) \ {u}`.
    /// Swapping two twins is an automorphism of the graph.
    pub fn twin_classes(&self) -> Vec<usize> {
        let mut class = vec![usize::MAX; self.n];
        let mut next = 0;
        for u in 0..self.n {
            if class[u] != usize::MAX {
                continue;
            }
            class[u] = next;
            for v in (u + 1)..self.n {
                if class[v] == usize::MAX && self.are_twins(u, v) {
                    class[v] = next;
                }
            }
            next += 1;
        }
        class
    }

    fn are_twins(&self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.row(u), self.row(v));
        let mask_uv = |i: usize| -> u64 {
            let mut m = 0u64;
            if u >> 6 == i {
                m |= 1u64 << (u & 63);
            }
            if v >> 6 == i {
                m |= 1u64 << (v & 63);
            }
            !m
        };
        (0..self.words).all(|i| (ru[i] & mask_uv(i)) == (rv[i] & mask_uv(i)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_rows() {
        let mut g = Graph::empty(130);
        g.add_edge(0, 129);
        g.add_edge(64, 65);
        assert!(g.has_edge(129, 0));
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.neighbours(64).collect::<Vec<_>>(), vec![65]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.complement().edge_count(), 130 * 129 / 2 - 2);
    }

    #[test]
    fn twins_in_clique_pair() {
        // two triangles joined through vertex 6
        let mut g = Graph::empty(7);
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            g.add_edge(a, b);
        }
        for v in 0..6 {
            g.add_edge(v, 6);
        }
        let c = g.twin_classes();
        assert_eq!(c[0], c[2]);
        assert_eq!(c[3], c[5]);
        assert_ne!(c[0], c[3]);
        assert_ne!(c[6], c[0]);
    }

    #[test]
    fn vertex_set_ops() {
        let mut a = VertexSet::from_iter_with_capacity(100, [1, 70, 99]);
        let b = VertexSet::from_iter_with_capacity(100, [70, 3]);
        assert_eq!(a.intersection_len(&b), 1);
        a.union_with(&b);
        assert_eq!(a.to_vec(), vec![1, 3, 70, 99]);
        a.difference_with(&b);
        assert_eq!(a.len(), 2);
    }
}
