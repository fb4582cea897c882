use gse_core::f2linalg::BitVector;
use gse_core::families::{generate, random_graph, seeded_rng, FamilySpec};
use gse_core::glc::{
    apply_rlc, decompose_2lc, incident_generators, is_genuine, is_r_incident, level_upper_bound,
    reduce_nongenuine, rlc_action, VertexMultiset,
};
use gse_core::localsets::{
    all_minimal_local_sets, find_mls_containing, is_minimal_local_set, mls_cover, mls_inside,
    mls_size_bound, smallest_mls_size,
};
use gse_core::oracle::verify_rlc_numeric;
use gse_core::{Graph, VertexSet};
use proptest::prelude::*;
use rand_core::RngCore;

/// Every minimal local set, straight from the definition: collect every
/// `D ∪ Odd(D)` and keep the inclusion-minimal ones.
fn brute_force_mls(g: &Graph) -> Vec<VertexSet> {
    let n = g.order();
    let mut locals = Vec::new();
    for mask in 1u64..(1 << n) {
        let d = BitVector::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
        locals.push(d.or(&g.odd_of(&d)));
    }
    locals.sort_by_key(|l| (l.count_ones(), l.to_indices()));
    locals.dedup();
    let mut out: Vec<VertexSet> = Vec::new();
    for l in &locals {
        if !locals.iter().any(|m| m != l && m.is_subset_of(l)) {
            out.push(l.clone());
        }
    }
    out
}

/// `L` is an MLS iff some `D ⊆ L` gives `D ∪ Odd(D) = L` and no such set is a
/// proper subset of `L`. Exponential in `|L|`.
fn brute_force_is_mls(g: &Graph, l: &VertexSet) -> bool {
    let members = l.to_indices();
    let mut is_local = false;
    for mask in 1u64..(1 << members.len()) {
        let d = g.set_of(
            (0..members.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| members[i]),
        );
        let loc = d.or(&g.odd_of(&d));
        if &loc == l {
            is_local = true;
        } else if loc.is_subset_of(l) {
            return false;
        }
    }
    is_local
}

fn set(g: &Graph, v: &[usize]) -> VertexSet {
    g.set_of(v.iter().copied())
}

#[test]
fn path7_has_mls_of_sizes_two_three_four() {
    let g = generate(FamilySpec::Path(7)).unwrap();
    for l in [&[0, 1][..], &[0, 2, 3], &[0, 2, 4, 5]] {
        assert!(is_minimal_local_set(&g, &set(&g, l)), "{l:?}");
    }
    let sizes: Vec<usize> = all_minimal_local_sets(&g)
        .unwrap()
        .iter()
        .map(|l| l.count_ones())
        .collect();
    for s in [2, 3, 4] {
        assert!(sizes.contains(&s));
    }
}

#[test]
fn complete_graph_mls_are_the_pairs() {
    let g = generate(FamilySpec::Complete(5)).unwrap();
    let all = all_minimal_local_sets(&g).unwrap();
    assert_eq!(all.len(), 10);
    assert!(all.iter().all(|l| l.count_ones() == 2));
}

#[test]
fn biclique_mls_are_same_side_pairs() {
    let g = generate(FamilySpec::CompleteBipartite(3, 3)).unwrap();
    let all = all_minimal_local_sets(&g).unwrap();
    assert_eq!(all.len(), 6);
    for l in &all {
        let v = l.to_indices();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0] < 3, v[1] < 3);
    }
}

#[test]
fn kk_minus_matching_has_many_mls() {
    for k in 3..=6 {
        let g = generate(FamilySpec::KkDeltaMatching(k)).unwrap();
        let count = all_minimal_local_sets(&g).unwrap().len();
        assert!(count >= 1 << (k - 1), "k={k}: {count}");
    }
}

#[test]
fn enumeration_matches_definition_on_small_graphs() {
    for seed in 0..120u64 {
        let n = 1 + (seed % 11) as usize;
        let g = random_graph(n, seed);
        let mut fast = all_minimal_local_sets(&g).unwrap();
        let mut slow = brute_force_mls(&g);
        fast.sort_by_key(|l| l.to_indices());
        slow.sort_by_key(|l| l.to_indices());
        assert_eq!(fast, slow, "seed {seed}");
        for l in &slow {
            assert!(l.count_ones() <= mls_size_bound(n), "seed {seed}");
        }
        let smallest = slow.iter().map(|l| l.count_ones()).min().unwrap();
        assert_eq!(smallest_mls_size(&g).unwrap(), smallest, "seed {seed}");
    }
}

#[test]
fn cover_members_are_minimal_and_cover() {
    for seed in 0..60u64 {
        let n = 2 + (seed % 25) as usize;
        let g = random_graph(n, 1000 + seed);
        let cover = mls_cover(&g);
        assert!(cover.covers(n), "seed {seed}");
        for rec in &cover.sets {
            assert!(is_minimal_local_set(&g, &rec.vertices), "seed {seed}");
            assert!(rec.len() <= mls_size_bound(n), "seed {seed}");
            if rec.len() <= 12 {
                assert!(brute_force_is_mls(&g, &rec.vertices), "seed {seed}");
            }
            assert!(matches!(rec.generators.len(), 1 | 3));
            for d in &rec.generators {
                assert!(d.is_subset_of(&rec.vertices));
                assert_eq!(d.or(&g.odd_of(d)), rec.vertices);
            }
        }
    }
}

#[test]
fn mls_through_each_vertex() {
    let g = generate(FamilySpec::Petersen).unwrap();
    for a in 0..10 {
        let rec = find_mls_containing(&g, a).unwrap();
        assert!(rec.vertices.get(a));
        assert!(is_minimal_local_set(&g, &rec.vertices));
    }
    assert!(find_mls_containing(&g, 10).is_err());
}

#[test]
fn mls_inside_finds_a_subset() {
    let g = generate(FamilySpec::Path(7)).unwrap();
    let l = set(&g, &[0, 1, 2, 3, 4, 5, 6]);
    let m = mls_inside(&g, &l).unwrap();
    assert!(m.is_subset_of(&l) && is_minimal_local_set(&g, &m));
    assert!(mls_inside(&g, &set(&g, &[3])).is_none());
}

#[test]
fn local_sets_are_lc_invariant() {
    for seed in 0..40u64 {
        let g = random_graph(9, 7 * seed);
        let h = g.apply_sequence(&[(seed % 9) as usize, ((seed / 9) % 9) as usize]);
        let mut a = all_minimal_local_sets(&g).unwrap();
        let mut b = all_minimal_local_sets(&h).unwrap();
        a.sort_by_key(|l| l.to_indices());
        b.sort_by_key(|l| l.to_indices());
        assert_eq!(a, b, "seed {seed}");
    }
}

// ------------------------------------------------------------------ r-LC

/// A random valid `(G, S, r)`: random graph, random independent set, random
/// combination of the incident generators on it.
fn random_instance(seed: u64, max_n: usize) -> Option<(Graph, VertexMultiset, u32)> {
    let mut rng = seeded_rng(seed);
    let n = 3 + (rng.next_u64() % (max_n as u64 - 2)) as usize;
    let r = 1 + (rng.next_u64() % 3) as u32;
    let g = random_graph(n, rng.next_u64());
    let mut indep = g.empty_set();
    for u in 0..n {
        if !rng.next_u64().is_multiple_of(3) && !g.neighbors(u).intersects(&indep) {
            indep.set(u, true);
        }
    }
    let gens = incident_generators(&g, &indep, r).ok()?;
    let mut s = VertexMultiset::empty(n);
    for gen in &gens {
        let c = rng.next_u64() % (1 << r);
        s = s.add(&gen.scaled(c), r);
    }
    Some((g, s, r))
}

#[test]
fn generators_are_incident_and_numerically_valid() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let Some((g, s, r)) = random_instance(seed, 10) else {
            continue;
        };
        assert!(is_r_incident(&g, &s, r).unwrap(), "seed {seed}");
        assert!(verify_rlc_numeric(&g, &s, r).unwrap(), "seed {seed}");
        checked += 1;
    }
    assert!(checked >= 150, "only {checked} instances");
}

#[test]
fn rlc_is_self_inverse_and_composes() {
    for seed in 0..200u64 {
        let Some((g, s, r)) = random_instance(seed, 12) else {
            continue;
        };
        let h = apply_rlc(&g, &s, r).unwrap();
        assert_eq!(apply_rlc(&h, &s, r).unwrap(), g, "seed {seed}");
        // A second incident multiset on the same support.
        let mut rng = seeded_rng(seed ^ 0xdead_beef);
        let gens = incident_generators(&g, &s.support(), r).unwrap();
        let t = gens
            .iter()
            .fold(VertexMultiset::empty(g.order()), |acc, x| {
                acc.add(&x.scaled(rng.next_u64() % (1 << r)), r)
            });
        let sum = s.add(&t, r);
        assert_eq!(
            apply_rlc(&h, &t, r).unwrap(),
            apply_rlc(&g, &sum, r).unwrap(),
            "seed {seed}"
        );
    }
}

#[test]
fn doubling_raises_the_level_with_the_same_action() {
    for seed in 0..200u64 {
        let Some((g, s, r)) = random_instance(seed, 12) else {
            continue;
        };
        let doubled = s.scaled(2);
        assert!(is_r_incident(&g, &doubled, r + 1).unwrap(), "seed {seed}");
        assert_eq!(
            apply_rlc(&g, &doubled, r + 1).unwrap(),
            apply_rlc(&g, &s, r).unwrap(),
            "seed {seed}"
        );
        if r > 1 {
            assert!(is_r_incident(&g, &s, r - 1).unwrap());
            assert_eq!(apply_rlc(&g, &s, r - 1).unwrap(), g, "seed {seed}");
        }
    }
}

#[test]
fn support_neighbourhoods_are_preserved() {
    for seed in 0..100u64 {
        let Some((g, s, r)) = random_instance(seed, 12) else {
            continue;
        };
        let h = apply_rlc(&g, &s, r).unwrap();
        for u in s.support().iter_ones() {
            assert_eq!(g.neighbors(u), h.neighbors(u));
        }
        for &(a, b) in &rlc_action(&g, &s, r) {
            assert_ne!(g.has_edge(a, b), h.has_edge(a, b));
        }
    }
}

#[test]
fn reduction_chains_keep_the_action() {
    let mut reductions = 0;
    for seed in 0..200u64 {
        let Some((g, s, r)) = random_instance(seed, 12) else {
            continue;
        };
        let target = apply_rlc(&g, &s, r).unwrap();
        let (mut cur, mut level) = (s, r);
        while level >= 2 && !is_genuine(&g, &cur, level).unwrap() {
            let mv = reduce_nongenuine(&g, &cur, level).unwrap();
            assert_eq!(mv.r, level - 1);
            assert!(is_r_incident(&g, &mv.s, mv.r).unwrap(), "seed {seed}");
            assert_eq!(apply_rlc(&g, &mv.s, mv.r).unwrap(), target, "seed {seed}");
            cur = mv.s;
            level = mv.r;
            reductions += 1;
        }
    }
    assert!(reductions > 0);
}

#[test]
fn two_lc_decomposition_matches() {
    for seed in 0..200u64 {
        let Some((g, s, r)) = random_instance(seed, 12) else {
            continue;
        };
        if r != 2 {
            continue;
        }
        let (s2, s1) = decompose_2lc(&s);
        let via = apply_rlc(&g, &VertexMultiset::from_set(&s2), 2)
            .unwrap()
            .apply_sequence(&s1.to_indices());
        assert_eq!(via, apply_rlc(&g, &s, 2).unwrap(), "seed {seed}");
    }
}

#[test]
fn rejects_invalid_moves() {
    let g = generate(FamilySpec::Path(3)).unwrap();
    let dependent = VertexMultiset::from_set(&set(&g, &[0, 1]));
    assert!(apply_rlc(&g, &dependent, 2).is_err());
    let mut lone = VertexMultiset::empty(3);
    lone.set(1, 1);
    // Λ^{0,2} = {1} has weight 1, not a multiple of 2 at level 2.
    assert!(!is_r_incident(&g, &lone, 2).unwrap());
    assert!(apply_rlc(&g, &lone, 2).is_err());
    assert!(apply_rlc(&g, &lone, 1).is_ok());
}

#[test]
fn level_bound_values() {
    assert_eq!(level_upper_bound(10), 1);
    assert_eq!(level_upper_bound(15), 1);
    assert_eq!(level_upper_bound(16), 2);
    assert_eq!(level_upper_bound(27), 2);
    assert_eq!(level_upper_bound(66), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn prop_rlc_valid_and_involutive(seed in any::<u64>()) {
        if let Some((g, s, r)) = random_instance(seed, 9) {
            let h = apply_rlc(&g, &s, r).unwrap();
            prop_assert!(h.is_well_formed());
            prop_assert_eq!(apply_rlc(&h, &s, r).unwrap(), g.clone());
            prop_assert!(verify_rlc_numeric(&g, &s, r).unwrap());
        }
    }

    #[test]
    fn prop_cover_exists(seed in any::<u64>(), n in 1usize..20) {
        let g = random_graph(n, seed);
        let cover = mls_cover(&g);
        prop_assert!(cover.covers(n));
        for rec in &cover.sets {
            prop_assert!(is_minimal_local_set(&g, &rec.vertices));
        }
    }
}
