//! Dense simple undirected graphs and the constructions built on them:
//! complements, disjoint unions, lexicographic products, twins.
//!
//! Adjacency is stored as bit-packed rows so that neighbourhood comparisons
//! and intersections are word operations.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

const WORD: usize = 64;

#[derive(Clone)]
pub struct Graph {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    // Labels carry provenance only.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}

impl Eq for Graph {}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Graph", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges())?;
        st.end()
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

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let stride = n.div_ceil(WORD).max(1);
        Graph {
            n,
            stride,
            bits: vec![0; stride * n],
            labels: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Cycle on `n >= 3` vertices, edges `i -- i+1 mod n`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.set_edge(u, (u + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.set_edge(u - 1, u);
        }
        g
    }

    /// The star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1);
        for v in 1..=leaves {
            g.set_edge(0, v);
        }
        g
    }

    /// Complete multipartite graph with the given part sizes, parts laid out
    /// consecutively.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n = parts.iter().sum();
        let mut part_of = Vec::with_capacity(n);
        for (i, &size) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(i, size));
        }
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.bits[u * self.stride + v / WORD] |= 1 << (v % WORD);
        self.bits[v * self.stride + u / WORD] |= 1 << (u % WORD);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.stride + v / WORD] >> (v % WORD) & 1 == 1
    }

    #[inline]
    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.stride..(u + 1) * self.stride]
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// `|N(u) ∩ N(v)|`.
    pub fn common_neighbours(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn same_neighbourhood(&self, u: usize, v: usize) -> bool {
        self.row(u) == self.row(v)
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Subgraph induced on `vertices`; new vertex `i` is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabelled copy in which old vertex `u` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbours(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// All-pairs BFS distances; `None` for disconnected pairs.
    pub fn distances(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.n)
            .map(|s| {
                let mut dist = vec![None; self.n];
                dist[s] = Some(0);
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    let d = dist[u].unwrap();
                    for v in self.neighbours(u) {
                        if dist[v].is_none() {
                            dist[v] = Some(d + 1);
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    pub fn twin_partition(&self) -> TwinPartition {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| self.row(a).cmp(self.row(b)).then(a.cmp(&b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in order {
            match classes.last_mut() {
                Some(last) if self.same_neighbourhood(last[0], v) => last.push(v),
                _ => classes.push(vec![v]),
            }
        }
        classes.sort_by_key(|c| c[0]);
        let uniform_size = match classes.first() {
            Some(first) if classes.iter().all(|c| c.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        TwinPartition {
            classes,
            uniform_size,
        }
    }

    pub fn has_twins(&self) -> bool {
        self.twin_partition().has_twins()
    }
}

/// Block-diagonal union of `graphs` plus each factor's first vertex id.
pub fn disjoint_union(graphs: &[Graph]) -> Result<(Graph, Vec<usize>), GraphError> {
    if graphs.is_empty() {
        return Err(GraphError::NoFactors);
    }
    let total = graphs.iter().map(Graph::n).sum();
    let mut g = Graph::empty(total);
    let mut offsets = Vec::with_capacity(graphs.len());
    let mut offset = 0;
    for h in graphs {
        offsets.push(offset);
        for (u, v) in h.edges() {
            g.set_edge(offset + u, offset + v);
        }
        offset += h.n();
    }
    Ok((g, offsets))
}

/// The lexicographic product `x[y]`: a copy of `y` for every vertex of `x`,
/// complete joins between copies whose `x`-vertices are adjacent.
/// Vertex `(a, b)` has flat index `a * |V(y)| + b`.
pub fn lex_product(x: &Graph, y: &Graph) -> Result<Graph, GraphError> {
    if x.n() == 0 || y.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let ny = y.n();
    let mut g = Graph::empty(x.n() * ny);
    for a in 0..x.n() {
        for (b, d) in y.edges() {
            g.set_edge(a * ny + b, a * ny + d);
        }
    }
    for (a, c) in x.edges() {
        for b in 0..ny {
            for d in 0..ny {
                g.set_edge(a * ny + b, c * ny + d);
            }
        }
    }
    Ok(g)
}

/// A vertex `(x, y)` of a lexicographic product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductVertex {
    pub x: usize,
    pub y: usize,
}

impl ProductVertex {
    pub fn new(x: usize, y: usize) -> Self {
        ProductVertex { x, y }
    }

    #[inline]
    pub fn flat(self, ny: usize) -> usize {
        self.x * ny + self.y
    }

    #[inline]
    pub fn from_flat(index: usize, ny: usize) -> Self {
        ProductVertex {
            x: index / ny,
            y: index % ny,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Diagonal,
    InnerEdge,
    OuterEdge,
    InnerNonedge,
    OuterNonedge,
}

impl PairClass {
    pub fn is_inner(self) -> bool {
        matches!(self, PairClass::InnerEdge | PairClass::InnerNonedge)
    }
}

/// Classify the pair `(p, q)` of `x[y]`.
pub fn classify_pair(
    x: &Graph,
    y: &Graph,
    p: ProductVertex,
    q: ProductVertex,
) -> Result<PairClass, GraphError> {
    for v in [p, q] {
        x.check_vertex(v.x)?;
        y.check_vertex(v.y)?;
    }
    Ok(if p == q {
        PairClass::Diagonal
    } else if p.x == q.x {
        if y.has_edge(p.y, q.y) {
            PairClass::InnerEdge
        } else {
            PairClass::InnerNonedge
        }
    } else if x.has_edge(p.x, q.x) {
        PairClass::OuterEdge
    } else {
        PairClass::OuterNonedge
    })
}

/// Classes of the twin relation (equal open neighbourhoods).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinPartition {
    /// Sorted blocks, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    /// `Some(α)` when every block has size α.
    pub uniform_size: Option<usize>,
}

impl TwinPartition {
    pub fn has_twins(&self) -> bool {
        self.classes.iter().any(|c| c.len() >= 2)
    }

    /// Block index of every vertex.
    pub fn class_index(&self) -> Vec<usize> {
        let n = self.classes.iter().map(Vec::len).sum();
        let mut idx = vec![0; n];
        for (i, c) in self.classes.iter().enumerate() {
            for &v in c {
                idx[v] = i;
            }
        }
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_k2() -> Graph {
        Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::empty(3).complement(), Graph::complete(3));
        let c4c = Graph::cycle(4).complement();
        assert_eq!(c4c.edges(), vec![(0, 2), (1, 3)]);
        assert_eq!(c4c.connected_components().len(), 2);
        // C5 complement is the pentagram 0-2-4-1-3-0, again a 5-cycle.
        let c5c = Graph::cycle(5).complement();
        assert!((0..5).all(|v| c5c.degree(v) == 2));
        assert!(c5c.is_connected());
        assert_eq!(c5c.edge_count(), 5);
    }

    #[test]
    fn disjoint_union_examples() {
        let k2 = Graph::complete(2);
        let (g, off) = disjoint_union(&[k2.clone(), k2.clone()]).unwrap();
        assert_eq!(g, two_k2());
        assert_eq!(off, vec![0, 2]);
        let (g, off) = disjoint_union(&[Graph::empty(1)]).unwrap();
        assert_eq!(g, Graph::empty(1));
        assert_eq!(off, vec![0]);
        let (g, _) = disjoint_union(&[k2, Graph::complete(3)]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (5, 4));
        assert_eq!(disjoint_union(&[]), Err(GraphError::NoFactors));
    }

    #[test]
    fn lex_product_examples() {
        let p = lex_product(&Graph::complete(2), &Graph::empty(2)).unwrap();
        assert_eq!(p, Graph::complete_multipartite(&[2, 2]));
        assert!((0..4).all(|v| p.degree(v) == 2));

        let c4k2 = lex_product(&Graph::cycle(4), &Graph::complete(2)).unwrap();
        assert_eq!(c4k2.n(), 8);
        assert_eq!(c4k2.edge_count(), 20);

        let g = Graph::path(4);
        assert_eq!(lex_product(&g, &Graph::empty(1)).unwrap(), g);
        assert_eq!(lex_product(&Graph::empty(1), &g).unwrap(), g);

        assert_eq!(lex_product(&Graph::empty(0), &g), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn classify_examples() {
        let (x, y) = (Graph::cycle(4), Graph::complete(2));
        let pv = ProductVertex::new;
        assert_eq!(
            classify_pair(&x, &y, pv(0, 0), pv(0, 1)).unwrap(),
            PairClass::InnerEdge
        );
        assert_eq!(
            classify_pair(&x, &y, pv(0, 0), pv(1, 0)).unwrap(),
            PairClass::OuterEdge
        );
        assert_eq!(
            classify_pair(&x, &y, pv(0, 0), pv(2, 1)).unwrap(),
            PairClass::OuterNonedge
        );
        assert_eq!(
            classify_pair(&x, &y, pv(3, 1), pv(3, 1)).unwrap(),
            PairClass::Diagonal
        );
        assert!(classify_pair(&x, &y, pv(4, 0), pv(0, 0)).is_err());
        assert!(classify_pair(&x, &y, pv(0, 2), pv(0, 0)).is_err());
    }

    #[test]
    fn components_examples() {
        assert_eq!(Graph::empty(2).connected_components(), vec![vec![0], vec![1]]);
        assert_eq!(Graph::cycle(4).connected_components(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(two_k2().connected_components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn twin_examples() {
        let t = Graph::empty(2).twin_partition();
        assert_eq!(t.classes, vec![vec![0, 1]]);
        assert_eq!(t.uniform_size, Some(2));

        let t = Graph::cycle(4).twin_partition();
        assert_eq!(t.classes, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(t.uniform_size, Some(2));

        let t = Graph::path(3).twin_partition();
        assert_eq!(t.classes, vec![vec![0, 2], vec![1]]);
        assert_eq!(t.uniform_size, None);
        assert!(t.has_twins());
        assert!(!Graph::path(4).has_twins());
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn wide_rows() {
        let g = Graph::cycle(130);
        assert_eq!(g.edge_count(), 130);
        assert!(g.has_edge(129, 0) && g.has_edge(64, 65) && !g.has_edge(63, 65));
        assert_eq!(g.complement().complement(), g);
    }
}
