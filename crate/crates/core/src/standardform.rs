//! Joint standardization of a graph pair with respect to a common MLS cover.
//!
//! In standard form there are no Y vertices, X vertices are independent and
//! only adjacent to larger Z vertices, and every closed X neighborhood belongs
//! to the cover. The procedure alternates pivots and local complementations
//! (steps 2–6) and grows the cover (steps 7–8). When both graphs are processed
//! at the same step, `G1` goes first; among candidate edges the lowest pair
//! wins.

use crate::error::{GseError, Result};
use crate::graph::{Graph, VertexSet};
use crate::localsets::{
    is_minimal_local_set, local_dimension, mls_cover, mls_inside, vertex_types, LocalSetRecord,
    MlsCover, VertexType,
};
use std::fmt;

use VertexType::{Bot, X, Y, Z};

/// Two LC-equivalent copies of the inputs in standard form w.r.t. `cover`.
#[derive(Clone, Debug)]
pub struct StandardFormPair {
    pub g1p: Graph,
    pub g2p: Graph,
    pub cover: MlsCover,
    pub types: Vec<VertexType>,
    pub seq1: Vec<usize>,
    pub seq2: Vec<usize>,
    pub vx: VertexSet,
    pub vz: VertexSet,
    pub vbot: VertexSet,
}

/// Why a pair was found not LU-equivalent during standardization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotLuReason {
    OrderMismatch,
    /// A cover set of `G1` is not a minimal local set of `G2`.
    CoverMismatch(Vec<usize>),
    /// A minimal local set found in step 7 differs between the two graphs.
    LocalSetMismatch(Vec<usize>),
    TypeMismatch(usize),
    NeighborhoodMismatch(usize),
}

impl fmt::Display for NotLuReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotLuReason::OrderMismatch => write!(f, "orders differ"),
            NotLuReason::CoverMismatch(s) => {
                write!(
                    f,
                    "cover set {s:?} is not a minimal local set of the second graph"
                )
            }
            NotLuReason::LocalSetMismatch(s) => {
                write!(f, "minimal local set {s:?} differs between the graphs")
            }
            NotLuReason::TypeMismatch(u) => write!(f, "vertex {u} has different types"),
            NotLuReason::NeighborhoodMismatch(u) => {
                write!(f, "X vertex {u} has different neighborhoods")
            }
        }
    }
}

/// Outcome of [`standardize_pair`].
#[derive(Clone, Debug)]
pub enum Standardization {
    Standard(Box<StandardFormPair>),
    NotLuEquivalent(NotLuReason),
}

impl Standardization {
    pub fn standard(self) -> Option<StandardFormPair> {
        match self {
            Standardization::Standard(p) => Some(*p),
            Standardization::NotLuEquivalent(_) => None,
        }
    }
}

/// A single move recorded during standardization, for inspection in tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardMove {
    Lc { graph: usize, u: usize },
    Pivot { graph: usize, u: usize, v: usize },
}

struct State {
    g: [Graph; 2],
    seq: [Vec<usize>; 2],
    cover: MlsCover,
    types: [Vec<VertexType>; 2],
    moves: Vec<StandardMove>,
}

impl State {
    fn retype(&mut self, i: usize) {
        self.types[i] = vertex_types(&self.g[i], &self.cover);
    }

    fn retype_all(&mut self) {
        self.retype(0);
        self.retype(1);
    }

    fn lc(&mut self, i: usize, u: usize) {
        self.g[i].local_complement_mut(u);
        self.seq[i].push(u);
        self.moves.push(StandardMove::Lc { graph: i, u });
        self.retype(i);
    }

    fn pivot(&mut self, i: usize, u: usize, v: usize) {
        self.g[i].pivot_mut(u, v);
        self.seq[i].extend([u, v, u]);
        self.moves.push(StandardMove::Pivot { graph: i, u, v });
        self.retype(i);
    }

    /// Lowest edge `(u, v)` of graph `i` with `pred(type u, type v, u, v)`;
    /// both orientations are tried.
    fn find_edge(
        &self,
        i: usize,
        pred: impl Fn(VertexType, VertexType, usize, usize) -> bool,
    ) -> Option<(usize, usize)> {
        let t = &self.types[i];
        for (a, b) in self.g[i].edges() {
            if pred(t[a], t[b], a, b) {
                return Some((a, b));
            }
            if pred(t[b], t[a], b, a) {
                return Some((b, a));
            }
        }
        None
    }

    fn find_edge_any(
        &self,
        pred: impl Fn(VertexType, VertexType, usize, usize) -> bool + Copy,
    ) -> Option<(usize, (usize, usize))> {
        (0..2).find_map(|i| self.find_edge(i, pred).map(|e| (i, e)))
    }

    fn metric(&self) -> usize {
        self.types
            .iter()
            .flatten()
            .map(|t| match t {
                Y => 2,
                X => 1,
                _ => 0,
            })
            .sum()
    }
}

/// Termination metric `2|V_Y| + |V_X|` summed over both graphs.
pub fn termination_metric(types1: &[VertexType], types2: &[VertexType]) -> usize {
    types1
        .iter()
        .chain(types2)
        .map(|t| match t {
            Y => 2,
            X => 1,
            _ => 0,
        })
        .sum()
}

/// Standardizes a pair, starting from a cover computed on `G1`.
pub fn standardize_pair(g1: &Graph, g2: &Graph) -> Result<Standardization> {
    let cover = mls_cover(g1);
    standardize_pair_with_cover(g1, g2, cover).map(|(s, _)| s)
}

/// Standardizes a pair from a given initial cover of `G1`, also returning the
/// moves performed.
pub fn standardize_pair_with_cover(
    g1: &Graph,
    g2: &Graph,
    cover: MlsCover,
) -> Result<(Standardization, Vec<StandardMove>)> {
    let n = g1.order();
    if g2.order() != n {
        return Ok((
            Standardization::NotLuEquivalent(NotLuReason::OrderMismatch),
            vec![],
        ));
    }
    for rec in &cover.sets {
        if !is_minimal_local_set(g1, &rec.vertices) {
            return Err(GseError::Precondition(
                "initial cover contains a set that is not minimal in the first graph".into(),
            ));
        }
        if !is_minimal_local_set(g2, &rec.vertices) {
            return Ok((
                Standardization::NotLuEquivalent(NotLuReason::CoverMismatch(
                    rec.vertices.to_indices(),
                )),
                vec![],
            ));
        }
    }
    if !cover.covers(n) {
        return Err(GseError::Precondition(
            "initial cover misses a vertex".into(),
        ));
    }
    let mut st = State {
        g: [g1.clone(), g2.clone()],
        seq: [Vec::new(), Vec::new()],
        cover,
        types: [Vec::new(), Vec::new()],
        moves: Vec::new(),
    };
    st.retype_all();
    let budget = 8 * (n + 1) * (n + 1) + 64;
    let mut steps = 0usize;
    let mut tick = || -> Result<()> {
        steps += 1;
        if steps > budget {
            Err(GseError::Internal(
                "standardization did not terminate".into(),
            ))
        } else {
            Ok(())
        }
    };

    // Steps 2–4.
    loop {
        while let Some((i, (u, v))) = st.find_edge_any(|a, b, _, _| a == X && b == X) {
            tick()?;
            st.pivot(i, u, v);
        }
        if let Some((i, (u, _))) = st.find_edge_any(|a, b, _, _| a == X && b == Y) {
            tick()?;
            st.lc(i, u);
            continue;
        }
        let y = (0..2).find_map(|i| st.types[i].iter().position(|&t| t == Y).map(|u| (i, u)));
        if let Some((i, u)) = y {
            tick()?;
            st.lc(i, u);
            continue;
        }
        break;
    }
    debug_assert!(st.metric() <= 2 * n);

    // Steps 5–7.
    loop {
        while let Some((i, (u, v))) = st.find_edge_any(|a, b, _, _| a == X && b == Bot) {
            tick()?;
            st.pivot(i, u, v);
        }
        while let Some((i, (u, v))) = st.find_edge_any(|a, b, u, v| a == X && b == Z && v < u) {
            tick()?;
            st.pivot(i, u, v);
        }
        let mut added = false;
        'search: for i in 0..2 {
            for u in 0..n {
                if st.types[i][u] != X {
                    continue;
                }
                let mut closed = st.g[i].neighbors(u).clone();
                closed.set(u, true);
                if is_minimal_local_set(&st.g[i], &closed)
                    && local_dimension(&st.g[i], &closed) == 1
                {
                    continue;
                }
                let m = mls_inside(&st.g[i], &closed).ok_or_else(|| {
                    GseError::Internal("closed X neighborhood is full cut-rank".into())
                })?;
                let other = &st.g[1 - i];
                if !is_minimal_local_set(other, &m)
                    || local_dimension(other, &m) != local_dimension(&st.g[i], &m)
                {
                    return Ok((
                        Standardization::NotLuEquivalent(NotLuReason::LocalSetMismatch(
                            m.to_indices(),
                        )),
                        st.moves,
                    ));
                }
                if st.cover.contains_set(&m) {
                    return Err(GseError::Internal(
                        "step 7 produced a set already in the cover".into(),
                    ));
                }
                tick()?;
                let rec = LocalSetRecord::for_mls(&st.g[0], &m);
                st.cover.sets.push(rec);
                st.retype_all();
                added = true;
                break 'search;
            }
        }
        if !added {
            break;
        }
    }

    // Step 8.
    for i in 0..2 {
        for u in 0..n {
            if st.types[i][u] != X {
                continue;
            }
            let mut closed = st.g[i].neighbors(u).clone();
            closed.set(u, true);
            if !st.cover.contains_set(&closed) {
                let rec = LocalSetRecord::for_mls(&st.g[0], &closed);
                st.cover.sets.push(rec);
            }
        }
    }
    st.retype_all();

    for u in 0..n {
        if st.types[0][u] != st.types[1][u] {
            return Ok((
                Standardization::NotLuEquivalent(NotLuReason::TypeMismatch(u)),
                st.moves,
            ));
        }
    }
    for u in 0..n {
        if st.types[0][u] == X && st.g[0].neighbors(u) != st.g[1].neighbors(u) {
            return Ok((
                Standardization::NotLuEquivalent(NotLuReason::NeighborhoodMismatch(u)),
                st.moves,
            ));
        }
    }
    let types = st.types[0].clone();
    let of = |t: VertexType| VertexSet::from_indices(n, (0..n).filter(|&u| types[u] == t));
    let (vx, vz, vbot) = (of(X), of(Z), of(Bot));
    let [g1p, g2p] = st.g;
    let [seq1, seq2] = st.seq;
    let pair = StandardFormPair {
        g1p,
        g2p,
        cover: st.cover,
        types,
        seq1,
        seq2,
        vx,
        vz,
        vbot,
    };
    Ok((Standardization::Standard(Box::new(pair)), st.moves))
}

/// Checks the standard-form conditions of one graph w.r.t. a cover.
pub fn is_standard_form(g: &Graph, cover: &MlsCover) -> bool {
    let types = vertex_types(g, cover);
    let n = g.order();
    for u in 0..n {
        match types[u] {
            Y => return false,
            X => {
                for v in g.neighbors(u).iter_ones() {
                    if types[v] != Z || v < u {
                        return false;
                    }
                }
                let mut closed = g.neighbors(u).clone();
                closed.set(u, true);
                if !cover.contains_set(&closed) {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}
