//! Labeled simple undirected graphs on vertices `0..n`, with the neighborhood
//! operators, local complementation, pivoting and the cut-rank function.

use crate::error::{GseError, Result};
use crate::f2linalg::BitVector;
use std::fmt;

/// A set of vertices, stored as a bitset over `0..n`.
pub type VertexSet = BitVector;

/// A labeled simple undirected graph with bitset adjacency rows.
///
/// Mutating helpers exist for search loops that own their graph; the public
/// operations in this module all return fresh values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph of order `n`.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![VertexSet::zeros(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GseError::Precondition(format!("self-loop at vertex {u}")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric predicate evaluated on pairs `u < v`.
    pub fn from_fn(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if edge(u, v) {
                    g.set_edge(u, v, true);
                }
            }
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn check_vertex(&self, u: usize) -> Result<()> {
        if u < self.n {
            Ok(())
        } else {
            Err(GseError::VertexOutOfRange {
                vertex: u,
                n: self.n,
            })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.len() == self.n {
            Ok(())
        } else {
            Err(GseError::DimensionMismatch {
                expected: self.n,
                got: s.len(),
            })
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].get(v)
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &VertexSet {
        &self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones()
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.adj[u].iter_ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::zeros(self.n)
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::ones(self.n)
    }

    pub fn set_of(&self, vertices: impl IntoIterator<Item = usize>) -> VertexSet {
        VertexSet::from_indices(self.n, vertices)
    }

    #[inline]
    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert_ne!(u, v);
        self.adj[u].set(v, present);
        self.adj[v].set(u, present);
    }

    #[inline]
    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adj[u].flip(v);
        self.adj[v].flip(u);
    }

    /// Symmetric difference of edge sets; both graphs must have equal order.
    pub fn edge_difference(&self, other: &Graph) -> Vec<(usize, usize)> {
        assert_eq!(self.n, other.n);
        let mut out = Vec::new();
        for u in 0..self.n {
            let d = self.adj[u].xor(&other.adj[u]);
            for v in d.iter_ones().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// `Odd(D)`: vertices adjacent to an odd number of vertices of `D`.
    pub fn odd_of(&self, d: &VertexSet) -> VertexSet {
        let mut acc = self.empty_set();
        for u in d.iter_ones() {
            acc.xor_assign(&self.adj[u]);
        }
        acc
    }

    /// `Λ^K`: vertices adjacent to every vertex of the nonempty set `K`.
    pub fn common_of(&self, k: &VertexSet) -> VertexSet {
        let mut it = k.iter_ones();
        let first = it.next().expect("common neighborhood of an empty set");
        let mut acc = self.adj[first].clone();
        for u in it {
            acc.and_assign(&self.adj[u]);
        }
        acc
    }

    /// In-place `G ⋆ u`.
    pub fn local_complement_mut(&mut self, u: usize) {
        let nu = self.adj[u].clone();
        for v in nu.iter_ones() {
            // Toggle N(u)\{v} in row v; the diagonal is never touched since v ∈ N(u).
            self.adj[v].xor_assign(&nu);
            self.adj[v].flip(v);
        }
    }

    /// In-place pivot `G ∧ uv = G ⋆ u ⋆ v ⋆ u`.
    pub fn pivot_mut(&mut self, u: usize, v: usize) {
        self.local_complement_mut(u);
        self.local_complement_mut(v);
        self.local_complement_mut(u);
    }

    /// Applies a sequence of local complementations in order.
    pub fn apply_sequence(&self, seq: &[usize]) -> Graph {
        let mut g = self.clone();
        for &u in seq {
            g.local_complement_mut(u);
        }
        g
    }

    /// The graph induced on `a`, relabeled in increasing vertex order.
    pub fn induced(&self, a: &VertexSet) -> Graph {
        let verts = a.to_indices();
        self.induced_on(&verts)
    }

    /// The graph induced on `verts`; new vertex `i` is `verts[i]`.
    pub fn induced_on(&self, verts: &[usize]) -> Graph {
        let k = verts.len();
        let mut g = Graph::empty(k);
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(verts[i], verts[j]) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    /// Deletes the vertices in `removed`, relabeling the rest in order.
    pub fn delete_vertices(&self, removed: &VertexSet) -> Graph {
        self.induced(&removed.complement())
    }

    /// Number of edges of `G[A]`.
    pub fn edges_within(&self, a: &VertexSet) -> usize {
        a.iter_ones()
            .map(|u| self.adj[u].and_count(a))
            .sum::<usize>()
            / 2
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = vec![s];
            while let Some(u) = stack.pop() {
                for v in self.adj[u].iter_ones() {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// True when `s` spans no edge.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter_ones().all(|u| !self.adj[u].intersects(s))
    }

    /// Cut-rank of `A`: F₂ rank of the `A × (V\A)` adjacency block.
    pub fn cut_rank_of(&self, a: &VertexSet) -> usize {
        if self.n <= 64 {
            let mask = !a.words().first().copied().unwrap_or(0);
            let mut basis = [0u64; 64];
            let mut rank = 0;
            for u in a.iter_ones() {
                let mut x = self.adj[u].words()[0] & mask;
                while x != 0 {
                    let h = 63 - x.leading_zeros() as usize;
                    if basis[h] == 0 {
                        basis[h] = x;
                        rank += 1;
                        break;
                    }
                    x ^= basis[h];
                }
            }
            return rank;
        }
        let outside = a.complement();
        let mut e = crate::f2linalg::Echelon::new(self.n);
        for u in a.iter_ones() {
            e.insert(self.adj[u].and(&outside));
        }
        e.rank()
    }

    /// Relabels vertices: vertex `u` of `self` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v], true);
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + self.n, v + self.n, true);
        }
        g
    }

    /// A graph on `n` vertices containing `self` on the first `self.order()`.
    pub fn with_extra_vertices(&self, extra: usize) -> Graph {
        self.disjoint_union(&Graph::empty(extra))
    }

    /// True when every row is symmetric and loop-free.
    pub fn is_well_formed(&self) -> bool {
        (0..self.n)
            .all(|u| !self.adj[u].get(u) && self.adj[u].iter_ones().all(|v| self.adj[v].get(u)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl fmt::Display for Graph {
    /// Edge-list text: the order on the first line, then one `u v` per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// `Odd_G(D)`, the symmetric difference of the neighborhoods of `D`.
pub fn odd_neighborhood(g: &Graph, d: &VertexSet) -> Result<VertexSet> {
    g.check_set(d)?;
    Ok(g.odd_of(d))
}

/// `Λ_G^K`, the common neighborhood of a nonempty set `K`.
pub fn common_neighborhood(g: &Graph, k: &VertexSet) -> Result<VertexSet> {
    g.check_set(k)?;
    if k.is_zero() {
        return Err(GseError::Precondition(
            "common neighborhood of the empty set".into(),
        ));
    }
    Ok(g.common_of(k))
}

/// `G ⋆ u`: complements the subgraph induced on `N(u)`.
pub fn local_complement(g: &Graph, u: usize) -> Result<Graph> {
    g.check_vertex(u)?;
    let mut h = g.clone();
    h.local_complement_mut(u);
    Ok(h)
}

/// `G ∧ uv = G ⋆ u ⋆ v ⋆ u`, defined on edges only.
pub fn pivot(g: &Graph, u: usize, v: usize) -> Result<Graph> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if !g.has_edge(u, v) {
        return Err(GseError::Precondition(format!(
            "pivot on the non-edge ({u}, {v})"
        )));
    }
    let mut h = g.clone();
    h.pivot_mut(u, v);
    Ok(h)
}

pub fn cut_rank(g: &Graph, a: &VertexSet) -> Result<usize> {
    g.check_set(a)?;
    Ok(g.cut_rank_of(a))
}

/// `G[A]` together with its edge count `|G[A]|`.
pub fn induced_subgraph(g: &Graph, a: &VertexSet) -> Result<(Graph, usize)> {
    g.check_set(a)?;
    let h = g.induced(a);
    let m = h.edge_count();
    Ok((h, m))
}
