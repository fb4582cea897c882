//! Generalized (r-)local complementation.
//!
//! A multiset `S` over an independent set is r-incident when for every
//! `k ∈ [0, r)` and every `K ⊆ V \ supp(S)` of size `k + 2`, the weighted count
//! `S•Λ^K` is a multiple of `2^{r−k−δ(k)}`. The r-local complementation over
//! `S` toggles every pair `{u, v}` with `S•Λ^{u,v} ≡ 2^{r−1} (mod 2ʳ)`.

use crate::error::{GseError, Result};
use crate::f2linalg::{solve_mod2r, Mod2rMatrix};
use crate::graph::{Graph, VertexSet};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

/// A multiplicity map `V → ℕ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexMultiset {
    mult: Vec<u64>,
}

impl VertexMultiset {
    pub fn empty(n: usize) -> Self {
        VertexMultiset { mult: vec![0; n] }
    }

    pub fn from_mults(mult: Vec<u64>) -> Self {
        VertexMultiset { mult }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, u64)]) -> Result<Self> {
        let mut s = VertexMultiset::empty(n);
        for &(v, m) in pairs {
            if v >= n {
                return Err(GseError::VertexOutOfRange { vertex: v, n });
            }
            s.mult[v] += m;
        }
        Ok(s)
    }

    /// Every vertex of `set` with multiplicity one.
    pub fn from_set(set: &VertexSet) -> Self {
        let mut s = VertexMultiset::empty(set.len());
        for u in set.iter_ones() {
            s.mult[u] = 1;
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mult.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    #[inline]
    pub fn get(&self, u: usize) -> u64 {
        self.mult[u]
    }

    pub fn set(&mut self, u: usize, m: u64) {
        self.mult[u] = m;
    }

    pub fn mults(&self) -> &[u64] {
        &self.mult
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::from_indices(
            self.mult.len(),
            self.mult
                .iter()
                .enumerate()
                .filter(|(_, &m)| m != 0)
                .map(|(i, _)| i),
        )
    }

    /// Nonzero `(vertex, multiplicity)` pairs in vertex order.
    pub fn pairs(&self) -> Vec<(usize, u64)> {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(i, &m)| (i, m))
            .collect()
    }

    /// Multiplicities reduced mod 2ʳ.
    pub fn normalized(&self, r: u32) -> Self {
        let mask = (1u64 << r) - 1;
        VertexMultiset {
            mult: self.mult.iter().map(|&m| m & mask).collect(),
        }
    }

    /// Pointwise sum mod 2ʳ.
    pub fn add(&self, other: &VertexMultiset, r: u32) -> Self {
        assert_eq!(self.len(), other.len());
        let mask = (1u64 << r) - 1;
        VertexMultiset {
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(&a, &b)| a.wrapping_add(b) & mask)
                .collect(),
        }
    }

    /// Every multiplicity multiplied by `c` (no reduction).
    pub fn scaled(&self, c: u64) -> Self {
        VertexMultiset {
            mult: self.mult.iter().map(|&m| m * c).collect(),
        }
    }

    /// `S•A = Σ_{u∈A} S(u)`.
    pub fn weight_on(&self, a: &VertexSet) -> u64 {
        a.iter_ones().map(|u| self.mult[u]).sum()
    }
}

impl fmt::Display for VertexMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, m)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{m}")?;
        }
        f.write_str("}")
    }
}

/// A single r-local complementation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RlcMove {
    pub s: VertexMultiset,
    pub r: u32,
}

#[inline]
fn delta(k: u32) -> u32 {
    u32::from(k == 0)
}

fn check_level(r: u32) -> Result<()> {
    if (1..=32).contains(&r) {
        Ok(())
    } else {
        Err(GseError::InvalidParameters(format!(
            "level r = {r} outside 1..=32"
        )))
    }
}

fn check_multiset(g: &Graph, s: &VertexMultiset) -> Result<()> {
    if s.len() != g.order() {
        return Err(GseError::DimensionMismatch {
            expected: g.order(),
            got: s.len(),
        });
    }
    if !g.is_independent(&s.support()) {
        return Err(GseError::DependentSupport);
    }
    Ok(())
}

/// Visits every `K ⊆ candidates` with `2 ≤ |K| ≤ max_size` and
/// `Λ^K ∩ within ≠ ∅`, passing `K` (ascending) and `Λ^K ∩ within`.
/// Returning false from `visit` aborts the walk.
fn walk_common_sets(
    g: &Graph,
    candidates: &[usize],
    within: &VertexSet,
    max_size: usize,
    visit: &mut dyn FnMut(&[usize], &VertexSet) -> bool,
) -> bool {
    fn rec(
        g: &Graph,
        candidates: &[usize],
        start: usize,
        k: &mut Vec<usize>,
        lambda: &VertexSet,
        max_size: usize,
        visit: &mut dyn FnMut(&[usize], &VertexSet) -> bool,
    ) -> bool {
        for i in start..candidates.len() {
            let v = candidates[i];
            let next = lambda.and(g.neighbors(v));
            if next.is_zero() {
                continue;
            }
            k.push(v);
            if k.len() >= 2 && !visit(k, &next) {
                return false;
            }
            if k.len() < max_size && !rec(g, candidates, i + 1, k, &next, max_size, visit) {
                return false;
            }
            k.pop();
        }
        true
    }
    let mut k = Vec::with_capacity(max_size);
    rec(g, candidates, 0, &mut k, within, max_size, visit)
}

/// Vertices outside `support` adjacent to at least one vertex of `support`.
fn touching(g: &Graph, support: &VertexSet) -> Vec<usize> {
    let mut acc = g.empty_set();
    for u in support.iter_ones() {
        acc.or_assign(g.neighbors(u));
    }
    acc.and_not_assign(support);
    acc.to_indices()
}

/// r-incidence test. Subsets `K` are explored by increasing size along the
/// subset lattice, with `Λ^K ∩ supp(S)` carried down each branch and empty
/// branches pruned.
pub fn is_r_incident(g: &Graph, s: &VertexMultiset, r: u32) -> Result<bool> {
    check_level(r)?;
    check_multiset(g, s)?;
    let s = s.normalized(r);
    let supp = s.support();
    let cand = touching(g, &supp);
    let mut ok = true;
    walk_common_sets(g, &cand, &supp, r as usize + 1, &mut |k, lambda| {
        let kk = k.len() as u32 - 2;
        let exp = r - kk - delta(kk);
        if exp > 0 && !s.weight_on(lambda).is_multiple_of(1u64 << exp) {
            ok = false;
        }
        ok
    });
    Ok(ok)
}

/// Pairs `(u, v)`, `u < v`, toggled by the r-local complementation over `S`.
/// Incidence is not checked.
pub fn rlc_action(g: &Graph, s: &VertexMultiset, r: u32) -> Vec<(usize, usize)> {
    let s = s.normalized(r);
    let supp = s.support();
    let modulus = 1u64 << r;
    let half = modulus >> 1;
    let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for w in supp.iter_ones() {
        let m = s.get(w);
        let nb = g.neighbors(w).to_indices();
        for (i, &u) in nb.iter().enumerate() {
            for &v in &nb[i + 1..] {
                *counts.entry((u, v)).or_insert(0) += m;
            }
        }
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c % modulus == half)
        .map(|(p, _)| p)
        .collect()
}

/// `G ⋆ʳ S`.
pub fn apply_rlc(g: &Graph, s: &VertexMultiset, r: u32) -> Result<Graph> {
    if !is_r_incident(g, s, r)? {
        return Err(GseError::NotIncident { r });
    }
    Ok(apply_rlc_unchecked(g, s, r))
}

/// `G ⋆ʳ S` without the incidence check.
pub fn apply_rlc_unchecked(g: &Graph, s: &VertexMultiset, r: u32) -> Graph {
    let mut h = g.clone();
    for (u, v) in rlc_action(g, s, r) {
        h.toggle_edge(u, v);
    }
    h
}

/// Sums of multiplicities over neighborhood classes of the support, keyed by
/// the shared neighborhood, together with the lowest vertex of each class.
fn neighborhood_classes(g: &Graph, s: &VertexMultiset) -> BTreeMap<Vec<usize>, (usize, u64)> {
    let mut classes: BTreeMap<Vec<usize>, (usize, u64)> = BTreeMap::new();
    for (u, m) in s.pairs() {
        let key = g.neighbors(u).to_indices();
        let e = classes.entry(key).or_insert((u, 0));
        e.1 += m;
    }
    classes
}

/// True iff some neighborhood class `K` with `|K| > 1` has odd total multiplicity.
pub fn is_genuine(g: &Graph, s: &VertexMultiset, r: u32) -> Result<bool> {
    check_level(r)?;
    check_multiset(g, s)?;
    let s = s.normalized(r);
    Ok(neighborhood_classes(g, &s)
        .iter()
        .any(|(k, &(_, sum))| k.len() > 1 && sum % 2 == 1))
}

/// Rewrites a non-genuine r-local complementation as an (r−1)-local one with
/// the same action: each neighborhood class collapses onto its lowest vertex,
/// classes with at most one neighbor are dropped, and multiplicities halve.
pub fn reduce_nongenuine(g: &Graph, s: &VertexMultiset, r: u32) -> Result<RlcMove> {
    if r < 2 {
        return Err(GseError::Precondition("reduction needs r ≥ 2".into()));
    }
    if is_genuine(g, s, r)? {
        return Err(GseError::Precondition(
            "multiset is genuine and cannot be reduced".into(),
        ));
    }
    let s = s.normalized(r);
    let mut out = VertexMultiset::empty(g.order());
    for (k, (rep, sum)) in neighborhood_classes(g, &s) {
        if k.len() > 1 {
            out.set(rep, sum / 2);
        }
    }
    Ok(RlcMove {
        s: out.normalized(r - 1),
        r: r - 1,
    })
}

/// Splits a 2-incident multiset into `(S2, S1)` with
/// `G ⋆² S = (G ⋆² S2) ⋆ S1`, where `S1` holds multiplicities 2 and 3 and
/// `S2` the odd multiplicities.
pub fn decompose_2lc(s: &VertexMultiset) -> (VertexSet, VertexSet) {
    let s = s.normalized(2);
    let n = s.len();
    let s1 = VertexSet::from_indices(n, (0..n).filter(|&u| s.get(u) >= 2));
    let s2 = VertexSet::from_indices(n, (0..n).filter(|&u| s.get(u) % 2 == 1));
    (s2, s1)
}

/// `max(1, ⌈log₂((n+1)/8)⌉)`: the level at which LU-equivalence of graphs of
/// order `n` is already witnessed.
pub fn level_upper_bound(n: usize) -> u32 {
    let mut r = 1u32;
    while (8u128 << r) < n as u128 + 1 {
        r += 1;
    }
    r
}

/// The linear system whose solutions mod 2ʳ are the r-incident multisets
/// supported on the independent set `within`.
///
/// One row per `K ⊆ V \ within` with `2 ≤ |K| ≤ r+1` and `Λ^K ∩ within ≠ ∅`,
/// with coefficient `2^{|K|−2+δ(|K|−2)}` on each vertex of `Λ^K ∩ within`;
/// rows whose coefficient vanishes mod 2ʳ are skipped. Variables follow the
/// ascending order of `within`. Vertices of `V \ within` that see no vertex of
/// `within` cannot contribute and are left out of the enumeration.
pub fn incidence_system(g: &Graph, within: &VertexSet, r: u32) -> Result<Mod2rMatrix> {
    check_level(r)?;
    g.check_set(within)?;
    if !g.is_independent(within) {
        return Err(GseError::DependentSupport);
    }
    let vars = within.to_indices();
    let mut index = vec![usize::MAX; g.order()];
    for (i, &v) in vars.iter().enumerate() {
        index[v] = i;
    }
    let mut m = Mod2rMatrix::zeros(0, vars.len(), r);
    let cand = touching(g, within);
    walk_common_sets(g, &cand, within, r as usize + 1, &mut |k, lambda| {
        let kk = k.len() as u32 - 2;
        let e = kk + delta(kk);
        if e < r {
            let mut row = vec![0u64; vars.len()];
            for u in lambda.iter_ones() {
                row[index[u]] = 1u64 << e;
            }
            m.push_row(row).expect("row width matches");
        }
        true
    });
    Ok(m)
}

/// Generators of the r-incident multisets supported on `within`.
pub fn incident_generators(g: &Graph, within: &VertexSet, r: u32) -> Result<Vec<VertexMultiset>> {
    let m = incidence_system(g, within, r)?;
    let vars = within.to_indices();
    let gens = solve_mod2r(&m, r)?;
    Ok(gens
        .into_iter()
        .filter(|x| x.iter().any(|&c| c != 0))
        .map(|x| {
            let mut s = VertexMultiset::empty(g.order());
            for (i, &v) in vars.iter().enumerate() {
                s.set(v, x[i]);
            }
            s
        })
        .collect())
}

/// One instance of the bipartite class `G_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SweepInstance {
    pub k: usize,
    /// Neighborhoods of the upper vertices, as bitmasks over `[k]`, ascending.
    pub words: Vec<u8>,
    /// Pairs of lower vertices toggled by the 2-local complementation over `S`.
    pub action: Vec<(usize, usize)>,
    pub implementable: bool,
}

impl SweepInstance {
    /// The bipartite graph: lower vertices `0..k`, then one upper vertex per word.
    pub fn graph(&self) -> Graph {
        let n = self.k + self.words.len();
        let mut g = Graph::empty(n);
        for (i, &w) in self.words.iter().enumerate() {
            for b in 0..self.k {
                if w >> b & 1 == 1 {
                    g.set_edge(b, self.k + i, true);
                }
            }
        }
        g
    }

    /// The upper vertices, each with multiplicity one.
    pub fn multiset(&self) -> VertexMultiset {
        let n = self.k + self.words.len();
        VertexMultiset::from_set(&VertexSet::from_indices(n, self.k..n))
    }
}

/// Per-size tallies of a sweep.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SweepBucket {
    pub instances: u64,
    pub identity: u64,
    pub implementable: u64,
    pub non_implementable: u64,
}

impl SweepBucket {
    fn merge(&mut self, o: &SweepBucket) {
        self.instances += o.instances;
        self.identity += o.identity;
        self.implementable += o.implementable;
        self.non_implementable += o.non_implementable;
    }
}

/// Outcome of [`sweep_bipartite_class`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SweepReport {
    pub k: usize,
    pub max_support: usize,
    /// `|G_k|`, the number of enumerated instances.
    pub class_size: u64,
    /// Instances with `|S| ≤ max_support`, split by `|S|`.
    pub by_support: BTreeMap<usize, SweepBucket>,
    /// Smallest nonempty `|S|` seen in the whole class.
    pub min_nonempty_support: Option<usize>,
    /// Non-implementable instances, first ones in enumeration order.
    pub counterexamples: Vec<SweepInstance>,
    /// Total number of non-implementable instances within the size limit.
    pub counterexample_count: u64,
}

impl SweepReport {
    pub fn totals(&self) -> SweepBucket {
        let mut t = SweepBucket::default();
        for b in self.by_support.values() {
            t.merge(b);
        }
        t
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.totals();
        writeln!(f, "sweep k={} max_support={}", self.k, self.max_support)?;
        writeln!(f, "class_size {}", self.class_size)?;
        writeln!(
            f,
            "totals instances={} identity={} implementable={} non_implementable={}",
            t.instances, t.identity, t.implementable, t.non_implementable
        )?;
        if let Some(m) = self.min_nonempty_support {
            writeln!(f, "min_nonempty_support {m}")?;
        }
        for (size, b) in &self.by_support {
            writeln!(
                f,
                "support {size} instances={} identity={} implementable={} non_implementable={}",
                b.instances, b.identity, b.implementable, b.non_implementable
            )?;
        }
        for c in &self.counterexamples {
            let words: Vec<String> = c
                .words
                .iter()
                .map(|w| {
                    (0..c.k)
                        .map(|b| if w >> b & 1 == 1 { '1' } else { '0' })
                        .collect()
                })
                .collect();
            writeln!(
                f,
                "counterexample |S|={} words={}",
                c.words.len(),
                words.join(",")
            )?;
        }
        Ok(())
    }
}

const SWEEP_LISTED: usize = 16;

struct SweepTables {
    k: usize,
    high_words: Vec<u8>,
    triples: Vec<(u8, u64)>,
    pairs: Vec<(u8, u64, usize)>,
    /// Pair-toggle vector (over pair indices) of each word's local complementation.
    lc_vec: [u16; 64],
}

impl SweepTables {
    fn new(k: usize) -> Self {
        let words: Vec<u8> = (0u8..(1u8 << k)).collect();
        let high_words = words
            .iter()
            .copied()
            .filter(|w| w.count_ones() >= 4)
            .collect();
        let supersets = |m: u8| -> u64 {
            words
                .iter()
                .filter(|&&w| w & m == m)
                .fold(0u64, |acc, &w| acc | 1u64 << w)
        };
        let triples = words
            .iter()
            .copied()
            .filter(|w| w.count_ones() == 3)
            .map(|t| (t, supersets(t)))
            .collect();
        let pairs: Vec<(u8, u64, usize)> = words
            .iter()
            .copied()
            .filter(|w| w.count_ones() == 2)
            .enumerate()
            .map(|(i, p)| (p, supersets(p), i))
            .collect();
        let mut lc_vec = [0u16; 64];
        for (w, slot) in lc_vec.iter_mut().enumerate().take(1 << k) {
            for &(p, _, i) in &pairs {
                if (w as u8) & p == p {
                    *slot |= 1 << i;
                }
            }
        }
        SweepTables {
            k,
            high_words,
            triples,
            pairs,
            lc_vec,
        }
    }

    /// Completes the weight-≥4 choice into the unique 2-incident word set.
    fn complete(&self, choice: u64) -> u64 {
        let mut s = 0u64;
        for (i, &w) in self.high_words.iter().enumerate() {
            if choice >> i & 1 == 1 {
                s |= 1u64 << w;
            }
        }
        let mut add = 0u64;
        for &(t, sup) in &self.triples {
            if (s & sup).count_ones() % 2 == 1 {
                add |= 1u64 << t;
            }
        }
        s |= add;
        add = 0;
        for &(p, sup, _) in &self.pairs {
            if (s & sup).count_ones() % 2 == 1 {
                add |= 1u64 << p;
            }
        }
        s | add
    }

    /// Toggle vector of the 2-local complementation and whether it lies in
    /// the span of the single-vertex local complementations.
    fn classify(&self, s: u64) -> (u16, bool) {
        let mut x = 0u16;
        for &(_, sup, i) in &self.pairs {
            if (s & sup).count_ones() % 4 == 2 {
                x |= 1 << i;
            }
        }
        let mut basis = [0u16; 16];
        let mut bits = s;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut v = self.lc_vec[w];
            while v != 0 {
                let h = 15 - v.leading_zeros() as usize;
                if basis[h] == 0 {
                    basis[h] = v;
                    break;
                }
                v ^= basis[h];
            }
        }
        let mut y = x;
        while y != 0 {
            let h = 15 - y.leading_zeros() as usize;
            if basis[h] == 0 {
                break;
            }
            y ^= basis[h];
        }
        (x, y == 0)
    }

    fn instance(&self, s: u64, x: u16, implementable: bool) -> SweepInstance {
        let words = (0..64u8).filter(|&w| s >> w & 1 == 1).collect();
        let action = self
            .pairs
            .iter()
            .filter(|&&(_, _, i)| x >> i & 1 == 1)
            .map(|&(p, _, _)| {
                let a = p.trailing_zeros() as usize;
                let b = 7 - p.leading_zeros() as usize;
                (a, b)
            })
            .collect();
        SweepInstance {
            k: self.k,
            words,
            action,
            implementable,
        }
    }
}

#[derive(Default)]
struct SweepAcc {
    by_support: BTreeMap<usize, SweepBucket>,
    min_nonempty: Option<usize>,
    examples: Vec<(u64, SweepInstance)>,
    count: u64,
}

impl SweepAcc {
    fn merge(mut self, o: SweepAcc) -> SweepAcc {
        for (k, b) in o.by_support {
            self.by_support.entry(k).or_default().merge(&b);
        }
        self.min_nonempty = match (self.min_nonempty, o.min_nonempty) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.examples.extend(o.examples);
        self.examples.sort_by_key(|(i, _)| *i);
        self.examples.truncate(SWEEP_LISTED);
        self.count += o.count;
        self
    }
}

/// Enumerates the class `G_k` of twin-free bipartite instances with a
/// 2-incident upper side `S` and `k` lower vertices, and classifies the
/// 2-local complementation over `S` for every instance with
/// `|S| ≤ max_support`.
///
/// `S` is fixed by its words of weight ≥ 4: triples are added when an odd
/// number of chosen words contain them, then pairs likewise, so the class has
/// `2^{C(k,4)+…+C(k,k)}` members. The work is split into fixed chunks over the
/// choice index and merged in index order, so reports are reproducible.
pub fn sweep_bipartite_class(k: usize, max_support: usize) -> Result<SweepReport> {
    if k > 6 {
        return Err(GseError::SizeGuard {
            what: "sweep lower side",
            value: k,
            limit: 6,
        });
    }
    let tables = SweepTables::new(k);
    let m = tables.high_words.len();
    let total = 1u64 << m;
    let chunk = 1u64 << 12;
    let chunks = total.div_ceil(chunk);
    let acc = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = SweepAcc::default();
            let end = ((c + 1) * chunk).min(total);
            for choice in c * chunk..end {
                let s = tables.complete(choice);
                let size = s.count_ones() as usize;
                if size > 0 {
                    acc.min_nonempty = Some(acc.min_nonempty.map_or(size, |x| x.min(size)));
                }
                if size > max_support {
                    continue;
                }
                let (x, implementable) = tables.classify(s);
                let b = acc.by_support.entry(size).or_default();
                b.instances += 1;
                if x == 0 {
                    b.identity += 1;
                }
                if implementable {
                    b.implementable += 1;
                } else {
                    b.non_implementable += 1;
                    acc.count += 1;
                    if acc.examples.len() < SWEEP_LISTED {
                        acc.examples.push((choice, tables.instance(s, x, false)));
                    }
                }
            }
            acc
        })
        .reduce(SweepAcc::default, SweepAcc::merge);
    Ok(SweepReport {
        k,
        max_support,
        class_size: total,
        by_support: acc.by_support,
        min_nonempty_support: acc.min_nonempty,
        counterexamples: acc.examples.into_iter().map(|(_, i)| i).collect(),
        counterexample_count: acc.count,
    })
}

/// Largest number of instances `enumerate_bipartite_class` will materialize.
pub const CLASS_LISTING_LIMIT: usize = 1 << 20;

/// Every instance of `G_k` with `|S| ≤ max_support`, for `k ≤ 6`, provided
/// there are at most [`CLASS_LISTING_LIMIT`] of them.
pub fn enumerate_bipartite_class(k: usize, max_support: usize) -> Result<Vec<SweepInstance>> {
    if k > 6 {
        return Err(GseError::SizeGuard {
            what: "explicit class listing",
            value: k,
            limit: 6,
        });
    }
    let tables = SweepTables::new(k);
    let total = 1u64 << tables.high_words.len();
    let fits = |c: &u64| tables.complete(*c).count_ones() as usize <= max_support;
    let listed = (0..total).into_par_iter().filter(fits).count();
    if listed > CLASS_LISTING_LIMIT {
        return Err(GseError::SizeGuard {
            what: "listed class instances",
            value: listed,
            limit: CLASS_LISTING_LIMIT,
        });
    }
    Ok((0..total)
        .into_par_iter()
        .filter(fits)
        .map(|c| {
            let s = tables.complete(c);
            let (x, imp) = tables.classify(s);
            tables.instance(s, x, imp)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The six-vertex example graph, 0-based.
    fn generalized_example() -> Graph {
        let e = [
            (1, 4),
            (1, 5),
            (1, 6),
            (2, 5),
            (2, 6),
            (3, 5),
            (3, 6),
            (4, 5),
            (5, 6),
        ];
        let edges: Vec<_> = e.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        Graph::from_edges(6, &edges).unwrap()
    }

    #[test]
    fn example_move_is_incident_and_toggles_two_edges() {
        let g = generalized_example();
        let s = VertexMultiset::from_pairs(6, &[(0, 2), (1, 1), (2, 1)]).unwrap();
        assert!(is_r_incident(&g, &s, 2).unwrap());
        assert_eq!(rlc_action(&g, &s, 2), vec![(3, 4), (3, 5)]);
    }

    #[test]
    fn level_one_is_always_incident() {
        let g = generalized_example();
        let s = VertexMultiset::from_pairs(6, &[(0, 1), (1, 1)]).unwrap();
        assert!(is_r_incident(&g, &s, 1).unwrap());
    }

    #[test]
    fn dependent_support_rejected() {
        let g = generalized_example();
        let s = VertexMultiset::from_pairs(6, &[(3, 1), (4, 1)]).unwrap();
        assert_eq!(is_r_incident(&g, &s, 1), Err(GseError::DependentSupport));
    }

    #[test]
    fn level_bounds() {
        assert_eq!(level_upper_bound(1), 1);
        assert_eq!(level_upper_bound(7), 1);
        assert_eq!(level_upper_bound(15), 1);
        assert_eq!(level_upper_bound(16), 2);
        assert_eq!(level_upper_bound(19), 2);
        assert_eq!(level_upper_bound(31), 2);
        assert_eq!(level_upper_bound(32), 3);
        assert_eq!(level_upper_bound(64), 4);
    }

    #[test]
    fn decomposition_example() {
        let s = VertexMultiset::from_pairs(6, &[(0, 2), (1, 1), (2, 1)]).unwrap();
        let (s2, s1) = decompose_2lc(&s);
        assert_eq!(s2.to_indices(), vec![1, 2]);
        assert_eq!(s1.to_indices(), vec![0]);
    }

    #[test]
    fn small_classes() {
        for k in 0..=3 {
            let r = sweep_bipartite_class(k, usize::MAX).unwrap();
            assert_eq!(r.class_size, 1);
            assert_eq!(r.min_nonempty_support, None);
        }
        let r4 = sweep_bipartite_class(4, usize::MAX).unwrap();
        assert_eq!(r4.class_size, 2);
        assert_eq!(r4.min_nonempty_support, Some(11));
        assert_eq!(r4.totals().identity, 2);
    }
}
