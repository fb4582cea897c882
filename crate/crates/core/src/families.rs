//! Named graph families and seeded random graphs.
//!
//! Labelings (0-based):
//! - `Path(n)`, `Cycle(n)`: `0 - 1 - … - (n-1)`, the cycle closing `n-1 ~ 0`.
//! - `CompleteBipartite(a, b)`: left `0..a`, right `a..a+b`.
//! - `KkDeltaMatching(k)`: left `i`, right `k + j`, edge iff `i ≠ j`.
//! - `Petersen`: outer cycle `5..10` in order, inner pentagram on `0..5`
//!   (`1-4, 4-2, 2-0, 0-3, 3-1`), spokes `i ~ i + 5`. `PetersenPermuted`
//!   swaps `i ↔ i + 5`.
//! - `Wheel10`: cycle `0..10` with chords `i ~ i + 5`.
//! - `Paley(q)`: `u ~ v` iff `u - v` is a nonzero square mod `q`.
//! - `Ctk(t, k)`: the `t` lower vertices `0..t`, then the `k`-subsets of
//!   `0..t` in lexicographic order, each adjacent to its members.
//!   `CtkPrime` adds a clique on the lower vertices.
//! - `Ce27`: bottoms `0..6`, then the 5-subsets, then the 4-subsets (both in
//!   lexicographic order). `Ce27Prime` adds the bottom clique.
//! - `RepeaterComplete(n)`: `K_n` on `0..n`, leaf `n + i` on `i`.
//! - `RepeaterBiclique(n)`: `K_{n,n}` on `0..2n`, leaf `2n + i` on `i`.
//! - `Grid(w, h)`: vertex `y * w + x`.

use crate::error::{GseError, Result};
use crate::graph::Graph;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use std::fmt;
use std::str::FromStr;

/// Largest order produced by [`generate`].
pub const MAX_FAMILY_ORDER: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    KkDeltaMatching(usize),
    Petersen,
    PetersenPermuted,
    Wheel10,
    Paley(usize),
    Ctk(usize, usize),
    CtkPrime(usize, usize),
    Ce27,
    Ce27Prime,
    RepeaterComplete(usize),
    RepeaterBiclique(usize),
    Grid(usize, usize),
}

fn invalid(msg: impl Into<String>) -> GseError {
    GseError::InvalidParameters(msg.into())
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(m: u64, s: u64) -> Option<u64> {
    if s > m {
        return Some(0);
    }
    let s = s.min(m - s);
    let mut acc: u128 = 1;
    for i in 0..s {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// All `k`-subsets of `0..t` in lexicographic order.
pub fn k_subsets(t: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > t {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < t - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Lower vertices `0..t` followed by one upper vertex per listed subset.
fn subset_graph(t: usize, uppers: &[Vec<usize>], lower_clique: bool) -> Graph {
    let n = t + uppers.len();
    let mut g = Graph::empty(n);
    for (i, set) in uppers.iter().enumerate() {
        for &u in set {
            g.set_edge(u, t + i, true);
        }
    }
    if lower_clique {
        for u in 0..t {
            for v in u + 1..t {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

fn ctk(t: usize, k: usize, prime: bool) -> Result<Graph> {
    if k == 0 || k > t {
        return Err(invalid(format!("need 1 ≤ k ≤ t, got t={t}, k={k}")));
    }
    let order = binomial(t as u64, k as u64).map_or(usize::MAX, |b| (b as usize).saturating_add(t));
    check_order(order)?;
    Ok(subset_graph(t, &k_subsets(t, k), prime))
}

fn ce27(prime: bool) -> Graph {
    let mut uppers = k_subsets(6, 5);
    uppers.extend(k_subsets(6, 4));
    subset_graph(6, &uppers, prime)
}

fn petersen() -> Graph {
    let mut edges = vec![(1, 4), (4, 2), (2, 0), (0, 3), (3, 1)];
    for i in 0..5 {
        edges.push((5 + i, 5 + (i + 1) % 5));
        edges.push((i, i + 5));
    }
    Graph::from_edges(10, &edges).expect("valid edge list")
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_FAMILY_ORDER {
        Err(GseError::SizeGuard {
            what: "family order",
            value: n,
            limit: MAX_FAMILY_ORDER,
        })
    } else {
        Ok(())
    }
}

/// Builds the graph named by `spec`.
pub fn generate(spec: FamilySpec) -> Result<Graph> {
    use FamilySpec::*;
    match spec {
        Path(n) => {
            check_order(n)?;
            Ok(Graph::from_fn(n, |u, v| v == u + 1))
        }
        Cycle(n) => {
            if n < 3 {
                return Err(invalid("a cycle needs at least 3 vertices"));
            }
            check_order(n)?;
            Ok(Graph::from_fn(n, |u, v| {
                v == u + 1 || (u == 0 && v == n - 1)
            }))
        }
        Complete(n) => {
            check_order(n)?;
            Ok(Graph::from_fn(n, |_, _| true))
        }
        CompleteBipartite(a, b) => {
            check_order(a + b)?;
            Ok(Graph::from_fn(a + b, |u, v| (u < a) != (v < a)))
        }
        KkDeltaMatching(k) => {
            if k == 0 {
                return Err(invalid("k must be positive"));
            }
            check_order(2 * k)?;
            Ok(Graph::from_fn(2 * k, |u, v| u < k && v >= k && v - k != u))
        }
        Petersen => Ok(petersen()),
        PetersenPermuted => {
            let perm: Vec<usize> = (0..10).map(|i| (i + 5) % 10).collect();
            Ok(petersen().permuted(&perm))
        }
        Wheel10 => Ok(Graph::from_fn(10, |u, v| {
            v == u + 1 || (u == 0 && v == 9) || v == u + 5
        })),
        Paley(q) => {
            if !matches!(q, 5 | 13 | 17 | 29) {
                return Err(invalid(format!(
                    "Paley order must be 5, 13, 17 or 29, got {q}"
                )));
            }
            debug_assert!(is_prime(q) && q % 4 == 1);
            let mut square = vec![false; q];
            for x in 1..q {
                square[x * x % q] = true;
            }
            Ok(Graph::from_fn(q, |u, v| square[(v - u) % q]))
        }
        Ctk(t, k) => ctk(t, k, false),
        CtkPrime(t, k) => ctk(t, k, true),
        Ce27 => Ok(ce27(false)),
        Ce27Prime => Ok(ce27(true)),
        RepeaterComplete(n) => {
            if n == 0 {
                return Err(invalid("repeater needs n ≥ 1"));
            }
            check_order(2 * n)?;
            Ok(Graph::from_fn(2 * n, |u, v| v < n || v == u + n))
        }
        RepeaterBiclique(n) => {
            if n == 0 {
                return Err(invalid("repeater needs n ≥ 1"));
            }
            check_order(4 * n)?;
            Ok(Graph::from_fn(4 * n, |u, v| {
                (u < n && (n..2 * n).contains(&v)) || v == u + 2 * n
            }))
        }
        Grid(w, h) => {
            if w == 0 || h == 0 {
                return Err(invalid("grid sides must be positive"));
            }
            check_order(w * h)?;
            Ok(Graph::from_fn(w * h, |u, v| {
                (v == u + 1 && v % w != 0) || v == u + w
            }))
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Path(n) => write!(f, "path:{n}"),
            Cycle(n) => write!(f, "cycle:{n}"),
            Complete(n) => write!(f, "complete:{n}"),
            CompleteBipartite(a, b) => write!(f, "complete-bipartite:{a},{b}"),
            KkDeltaMatching(k) => write!(f, "kk-delta-matching:{k}"),
            Petersen => write!(f, "petersen"),
            PetersenPermuted => write!(f, "petersen-permuted"),
            Wheel10 => write!(f, "wheel10"),
            Paley(q) => write!(f, "paley:{q}"),
            Ctk(t, k) => write!(f, "ctk:{t},{k}"),
            CtkPrime(t, k) => write!(f, "ctk-prime:{t},{k}"),
            Ce27 => write!(f, "ce27"),
            Ce27Prime => write!(f, "ce27-prime"),
            RepeaterComplete(n) => write!(f, "repeater-complete:{n}"),
            RepeaterBiclique(n) => write!(f, "repeater-biclique:{n}"),
            Grid(w, h) => write!(f, "grid:{w},{h}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = GseError;

    fn from_str(s: &str) -> Result<Self> {
        use FamilySpec::*;
        let (name, args) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), ""),
        };
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| invalid(format!("bad family parameter {x:?}")))
                })
                .collect::<Result<_>>()?
        };
        let name = name.to_ascii_lowercase();
        let arity = match name.as_str() {
            "petersen" | "petersen-permuted" | "wheel10" | "ce27" | "ce27-prime" => 0,
            "complete-bipartite" | "ctk" | "ctk-prime" | "grid" => 2,
            _ => 1,
        };
        if nums.len() != arity {
            return Err(invalid(format!("family {name} takes {arity} parameter(s)")));
        }
        let at = |i: usize| nums[i];
        let spec = match name.as_str() {
            "path" => Path(at(0)),
            "cycle" => Cycle(at(0)),
            "complete" => Complete(at(0)),
            "complete-bipartite" => CompleteBipartite(at(0), at(1)),
            "kk-delta-matching" => KkDeltaMatching(at(0)),
            "petersen" => Petersen,
            "petersen-permuted" => PetersenPermuted,
            "wheel10" => Wheel10,
            "paley" => Paley(at(0)),
            "ctk" => Ctk(at(0), at(1)),
            "ctk-prime" => CtkPrime(at(0), at(1)),
            "ce27" => Ce27,
            "ce27-prime" => Ce27Prime,
            "repeater-complete" => RepeaterComplete(at(0)),
            "repeater-biclique" => RepeaterBiclique(at(0)),
            "grid" => Grid(at(0), at(1)),
            other => return Err(invalid(format!("unknown family {other:?}"))),
        };
        Ok(spec)
    }
}

/// The generator behind every seeded construction: xoshiro256** whose state
/// is filled from the seed by SplitMix64.
pub fn seeded_rng(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}

/// Random bipartite graph with left side `0..l` and right side `l..l+r`.
/// Each cross pair, in row-major order, is an edge when the top bit of the
/// next 64-bit draw is set.
pub fn random_bipartite(l: usize, r: usize, seed: u64) -> Graph {
    let mut rng = seeded_rng(seed);
    let mut g = Graph::empty(l + r);
    for u in 0..l {
        for v in 0..r {
            if rng.next_u64() >> 63 == 1 {
                g.set_edge(u, l + v, true);
            }
        }
    }
    g
}

/// Random graph with each pair present with probability 1/2, pairs drawn in
/// row-major order `(u, v)`, `u < v`.
pub fn random_graph(n: usize, seed: u64) -> Graph {
    let mut rng = seeded_rng(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_u64() >> 63 == 1 {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// 2-adic valuation of `binom(m, s)`, as `w(s) + w(m - s) - w(m)` with `w`
/// the Hamming weight.
pub fn binom_2adic(m: u64, s: u64) -> Result<u32> {
    if s > m {
        return Err(invalid(format!(
            "binom_2adic needs s ≤ m, got m={m}, s={s}"
        )));
    }
    Ok(s.count_ones() + (m - s).count_ones() - m.count_ones())
}

/// `(t, k)` with `k = 2^r + 1` and `t = 2^r + 2^{⌊log₂ r⌋ + 1} - 1`.
pub fn ctk_hierarchy_params(r: u32) -> Result<(usize, usize)> {
    if r < 2 {
        return Err(invalid("hierarchy parameters need r ≥ 2"));
    }
    if r > 20 {
        return Err(invalid("hierarchy level too large"));
    }
    let p = 1usize << r;
    let lg = 31 - r.leading_zeros();
    Ok((p + (1usize << (lg + 1)) - 1, p + 1))
}

/// Sufficient arithmetic condition for `C_{t,k} ⋆^r (all uppers) = C'_{t,k}`:
/// `binom(t-2, k-2)` has valuation exactly `r - 1`, and `binom(t-i-2, k-i-2)`
/// is divisible by `2^{r-i}` for `1 ≤ i < r`.
pub fn ctk_lcr_conditions(t: usize, k: usize, r: u32) -> bool {
    if k < 2 || t < k || r == 0 {
        return false;
    }
    let (t, k) = (t as u64, k as u64);
    if binom_2adic(t - 2, k - 2)
        .map(|v| v + 1 != r)
        .unwrap_or(true)
    {
        return false;
    }
    (1..r as u64).all(|i| {
        if k < i + 2 {
            return true;
        }
        binom_2adic(t - i - 2, k - i - 2)
            .map(|v| v as u64 >= r as u64 - i)
            .unwrap_or(false)
    })
}

/// Sufficient arithmetic condition for `C_{t,k}` and `C'_{t,k}` not being
/// LC_r-equivalent: `k` odd, `k ≥ 3`, `t ≥ k + 2`, `binom(t, 2)` odd and
/// `2^r | binom(k, 2)`.
pub fn ctk_not_lcr_conditions(t: usize, k: usize, r: u32) -> bool {
    k % 2 == 1
        && k >= 3
        && t >= k + 2
        && binom_2adic(t as u64, 2).map(|v| v == 0).unwrap_or(false)
        && binom_2adic(k as u64, 2).map(|v| v >= r).unwrap_or(false)
}

/// Smallest-order `(t, k)` with `t <= max_t` meeting both the LC_r condition
/// and the not-LC_{r-1} condition, so the pair is LC_r but not LC_{r-1}.
pub fn ctk_hierarchy_search(r: u32, max_t: usize) -> Option<(usize, usize)> {
    if r < 2 {
        return None;
    }
    let mut best: Option<(u64, usize, usize)> = None;
    for k in 3..=max_t {
        for t in k + 2..=max_t {
            if !(ctk_lcr_conditions(t, k, r) && ctk_not_lcr_conditions(t, k, r - 1)) {
                continue;
            }
            let Some(order) = binomial(t as u64, k as u64).and_then(|b| b.checked_add(t as u64))
            else {
                continue;
            };
            if best.is_none_or(|(o, _, _)| order < o) {
                best = Some((order, t, k));
            }
        }
    }
    best.map(|(_, t, k)| (t, k))
}
