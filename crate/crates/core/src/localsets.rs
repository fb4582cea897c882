//! Local sets, minimal local sets (MLS), MLS covers and vertex types.
//!
//! A local set is `D ∪ Odd(D)` for a nonempty `D`. Minimality is tested
//! through the cut-rank: `L` is minimal iff it is not full cut-rank while each
//! `L \ {a}` is.

use crate::error::{GseError, Result};
use crate::f2linalg::{AffineSystem, BitVector};
use crate::graph::{Graph, VertexSet};
use std::collections::HashSet;
use std::fmt;

/// A minimal local set together with its generators in a given graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalSetRecord {
    pub vertices: VertexSet,
    pub generators: Vec<VertexSet>,
    /// 1 when the set has a single generator, 2 when it has three.
    pub dimension: usize,
}

impl LocalSetRecord {
    /// Record for a set already known to be an MLS of `g`.
    pub fn for_mls(g: &Graph, l: &VertexSet) -> Self {
        let generators = generators_of(g, l);
        let dimension = if generators.len() == 3 { 2 } else { 1 };
        LocalSetRecord {
            vertices: l.clone(),
            generators,
            dimension,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_zero()
    }
}

/// A family of minimal local sets covering every vertex.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MlsCover {
    pub sets: Vec<LocalSetRecord>,
}

impl MlsCover {
    pub fn covered(&self, n: usize) -> VertexSet {
        let mut acc = VertexSet::zeros(n);
        for s in &self.sets {
            acc.or_assign(&s.vertices);
        }
        acc
    }

    pub fn covers(&self, n: usize) -> bool {
        self.covered(n).count_ones() == n
    }

    pub fn contains_set(&self, l: &VertexSet) -> bool {
        self.sets.iter().any(|s| &s.vertices == l)
    }
}

/// Position of a vertex with respect to the generators of a cover.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum VertexType {
    X,
    Y,
    Z,
    Bot,
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexType::X => "X",
            VertexType::Y => "Y",
            VertexType::Z => "Z",
            VertexType::Bot => "⊥",
        })
    }
}

fn is_full_cut_rank(g: &Graph, s: &VertexSet) -> bool {
    g.cut_rank_of(s) == s.count_ones()
}

/// Basis of `{D ⊆ L : Odd(D) ⊆ L}` (the kernel of the cut map of `L`).
fn closed_subsets_basis(g: &Graph, l: &VertexSet) -> Vec<VertexSet> {
    let members = l.to_indices();
    let k = members.len();
    let mut sys = AffineSystem::new(k);
    for w in l.complement().iter_ones() {
        let row = BitVector::from_indices(
            k,
            members
                .iter()
                .enumerate()
                .filter(|(_, &u)| g.has_edge(u, w))
                .map(|(i, _)| i),
        );
        if !row.is_zero() {
            sys.add_equation(&row, false);
        }
    }
    let (_, basis) = sys.solution();
    basis
        .into_iter()
        .map(|b| g.set_of(b.iter_ones().map(|i| members[i])))
        .collect()
}

/// All nonempty `D ⊆ L` with `D ∪ Odd(D) = L`; empty when `L` is not local.
///
/// Enumerates the kernel of the cut map of `L`, so the cost is exponential in
/// `|L| − cutrk(L)`; on minimal local sets that is at most 2.
pub fn generators_of(g: &Graph, l: &VertexSet) -> Vec<VertexSet> {
    let basis = closed_subsets_basis(g, l);
    let dim = basis.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << dim) {
        let mut d = g.empty_set();
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d.xor_assign(b);
            }
        }
        if &d.or(&g.odd_of(&d)) == l {
            out.push(d);
        }
    }
    out.sort_by_key(|d| d.to_indices());
    out
}

/// True iff `L` is a minimal local set, by the cut-rank characterization.
pub fn is_minimal_local_set(g: &Graph, l: &VertexSet) -> bool {
    let size = l.count_ones();
    if size == 0 || g.cut_rank_of(l) >= size {
        return false;
    }
    l.iter_ones().all(|a| {
        let mut sub = l.clone();
        sub.set(a, false);
        g.cut_rank_of(&sub) == size - 1
    })
}

/// Dimension of the generator space of a local set: `|L| − cutrk(L)`.
pub fn local_dimension(g: &Graph, l: &VertexSet) -> usize {
    l.count_ones() - g.cut_rank_of(l)
}

/// A minimal local set containing `a`, built in two stages: grow a full
/// cut-rank set `A` until `A ∪ {a}` stops being full cut-rank, then shrink
/// `A` to inclusion-minimality.
pub fn find_mls_containing(g: &Graph, a: usize) -> Result<LocalSetRecord> {
    g.check_vertex(a)?;
    let mut cur = g.empty_set();
    loop {
        let mut with_a = cur.clone();
        with_a.set(a, true);
        if !is_full_cut_rank(g, &with_a) {
            break;
        }
        let target = cur.count_ones() + 1;
        let mut b = with_a.complement();
        while b.count_ones() > target {
            let removable = b.iter_ones().find(|&x| {
                let mut t = b.clone();
                t.set(x, false);
                g.cut_rank_of(&t) >= target
            });
            match removable {
                Some(x) => b.set(x, false),
                None => {
                    return Err(GseError::Internal(
                        "no removable vertex while growing a full cut-rank set".into(),
                    ))
                }
            }
        }
        cur = b;
    }
    for b in cur.to_indices() {
        let mut t = cur.clone();
        t.set(b, false);
        t.set(a, true);
        if !is_full_cut_rank(g, &t) {
            cur.set(b, false);
        }
    }
    cur.set(a, true);
    debug_assert!(is_minimal_local_set(g, &cur));
    Ok(LocalSetRecord::for_mls(g, &cur))
}

/// An MLS cover built by calling [`find_mls_containing`] on the lowest
/// uncovered vertex until every vertex is covered.
pub fn mls_cover(g: &Graph) -> MlsCover {
    let n = g.order();
    let mut cover = MlsCover::default();
    let mut covered = g.empty_set();
    for a in 0..n {
        if covered.get(a) {
            continue;
        }
        let rec = find_mls_containing(g, a).expect("vertex in range");
        covered.or_assign(&rec.vertices);
        cover.sets.push(rec);
    }
    cover
}

/// An MLS contained in `L`, which must not be full cut-rank.
///
/// Shrinks `L` greedily: each vertex is dropped when the remainder is still
/// not full cut-rank. One ascending pass suffices because subsets of full
/// cut-rank sets are full cut-rank.
pub fn mls_inside(g: &Graph, l: &VertexSet) -> Option<VertexSet> {
    if is_full_cut_rank(g, l) {
        return None;
    }
    let mut cur = l.clone();
    for x in l.to_indices() {
        cur.set(x, false);
        if is_full_cut_rank(g, &cur) {
            cur.set(x, true);
        }
    }
    Some(cur)
}

/// Types of every vertex with respect to a cover, computed in `g`.
///
/// Generators depend on the graph, so they are recomputed here from the
/// cover's vertex sets rather than read from the records.
pub fn vertex_types(g: &Graph, cover: &MlsCover) -> Vec<VertexType> {
    let n = g.order();
    let mut types: Vec<Option<VertexType>> = vec![None; n];
    let mut bot = vec![false; n];
    for rec in &cover.sets {
        let l = &rec.vertices;
        if local_dimension(g, l) != 1 {
            for u in l.iter_ones() {
                bot[u] = true;
            }
            continue;
        }
        let basis = closed_subsets_basis(g, l);
        let d = &basis[0];
        let odd = g.odd_of(d);
        for u in l.iter_ones() {
            let t = match (d.get(u), odd.get(u)) {
                (true, false) => VertexType::X,
                (true, true) => VertexType::Y,
                (false, true) => VertexType::Z,
                (false, false) => unreachable!("vertex of a local set outside D ∪ Odd(D)"),
            };
            match types[u] {
                None => types[u] = Some(t),
                Some(prev) if prev != t => bot[u] = true,
                _ => {}
            }
        }
    }
    (0..n)
        .map(|u| {
            if bot[u] {
                VertexType::Bot
            } else {
                types[u].unwrap_or(VertexType::Bot)
            }
        })
        .collect()
}

/// Largest possible minimal local set in a graph of order `n`: `n/2` when
/// `4 | n`, `⌊n/2⌋ + 1` otherwise.
pub fn mls_size_bound(n: usize) -> usize {
    if n.is_multiple_of(4) {
        n / 2
    } else {
        n / 2 + 1
    }
}

/// Every minimal local set of `g`, by enumerating all nonempty `D`.
pub fn all_minimal_local_sets(g: &Graph) -> Result<Vec<VertexSet>> {
    const LIMIT: usize = 28;
    let n = g.order();
    if n > LIMIT {
        return Err(GseError::SizeGuard {
            what: "order for M_max enumeration",
            value: n,
            limit: LIMIT,
        });
    }
    let rows: Vec<u64> = (0..n).map(|u| g.neighbors(u).words()[0]).collect();
    let max_size = mls_size_bound(n);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut odd = 0u64;
    for i in 1u64..(1u64 << n) {
        let flip = i.trailing_zeros() as usize;
        odd ^= rows[flip];
        let d = i ^ (i >> 1);
        let l = d | odd;
        if (l.count_ones() as usize) <= max_size.max(1) {
            seen.insert(l);
        }
    }
    let mut out: Vec<VertexSet> = seen
        .into_iter()
        .map(|m| g.set_of((0..n).filter(|&i| m >> i & 1 == 1)))
        .filter(|l| is_minimal_local_set(g, l))
        .collect();
    out.sort_by_key(|l| (l.count_ones(), l.to_indices()));
    Ok(out)
}

/// The maximal cover `M_max`, made of every minimal local set.
pub fn maximal_cover(g: &Graph) -> Result<MlsCover> {
    let sets = all_minimal_local_sets(g)?
        .into_iter()
        .map(|l| LocalSetRecord::for_mls(g, &l))
        .collect();
    Ok(MlsCover { sets })
}

/// `min |D ∪ Odd(D)|` over nonempty `D`, which equals `δ_loc(G) + 1`.
pub fn smallest_mls_size(g: &Graph) -> Result<usize> {
    const LIMIT: usize = 26;
    let n = g.order();
    if n > LIMIT {
        return Err(GseError::SizeGuard {
            what: "order for smallest local set enumeration",
            value: n,
            limit: LIMIT,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let rows: Vec<u64> = (0..n).map(|u| g.neighbors(u).words()[0]).collect();
    let mut best = n;
    let mut odd = 0u64;
    for i in 1u64..(1u64 << n) {
        odd ^= rows[i.trailing_zeros() as usize];
        let d = i ^ (i >> 1);
        best = best.min((d | odd).count_ones() as usize);
    }
    Ok(best)
}
