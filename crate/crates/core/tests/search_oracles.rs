//! Unpruned brute-force cross-checks for the search layer.
//!
//! Everything here re-derives a search-layer answer by walking *all*
//! multisets of the relevant length with no pruning and no symmetry
//! reduction, sharing nothing with the engine's own walk.

use std::collections::BTreeSet;

use zerosum_core::search::{davenport_bruteforce, disc_bruteforce, extremal_sequences, l1_set};
use zerosum_core::sequence::Sequence;
use zerosum_core::spectrum::length_spectrum;
use zerosum_core::{Element, Group, Limits, SearchConfig};

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

/// Visits every multiset of exactly `len` elements over `g`.
fn for_each_multiset_of(g: &Group, len: usize, f: &mut impl FnMut(&Sequence)) {
    fn rec(
        g: &Group,
        len: usize,
        start: usize,
        picked: &mut Vec<Element>,
        f: &mut impl FnMut(&Sequence),
    ) {
        if len == 0 {
            let entries: Vec<(Element, u32)> = picked.iter().map(|&e| (e, 1)).collect();
            f(&Sequence::from_entries(*g, &entries).expect("valid elements"));
            return;
        }
        for idx in start..g.order() {
            picked.push(g.element_at(idx));
            rec(g, len - 1, idx, picked, f);
            picked.pop();
        }
    }
    rec(g, len, 0, &mut Vec::new(), f);
}

fn zero_sum_free(s: &Sequence) -> bool {
    length_spectrum(s, &Limits::default()).unwrap().is_empty()
}

#[test]
fn davenport_agrees_with_unpruned_enumeration() {
    for (n1, n2) in [(1, 4), (2, 2), (2, 4), (3, 3)] {
        let g = Group::new(n1, n2).unwrap();
        let claimed = davenport_bruteforce(&g, &cfg()).unwrap() as usize;
        // a zero-sum-free sequence of length claimed-1 exists...
        let mut found = false;
        for_each_multiset_of(&g, claimed - 1, &mut |s| found |= zero_sum_free(s));
        assert!(found || claimed == 1, "no witness at length {}", claimed - 1);
        // ...and none of length claimed does
        let mut any = false;
        for_each_multiset_of(&g, claimed, &mut |s| any |= zero_sum_free(s));
        assert!(!any, "zero-sum-free sequence of length {claimed} exists");
    }
}

#[test]
fn disc_and_l1_agree_with_unpruned_enumeration() {
    for (n1, n2) in [(2, 2), (2, 4), (3, 3)] {
        let g = Group::new(n1, n2).unwrap();
        let disc = disc_bruteforce(&g, &cfg()).unwrap() as usize;

        // the boundary length admits a singleton-spectrum sequence, and the
        // values observed there are exactly the engine's L1 set
        let mut observed = BTreeSet::new();
        for_each_multiset_of(&g, disc - 1, &mut |s| {
            let spectrum = length_spectrum(s, &Limits::default()).unwrap();
            if spectrum.len() <= 1 {
                let k = spectrum.lengths().iter().next().copied();
                observed.insert(k.expect("length disc-1 is at least D(G)"));
            }
        });
        assert!(!observed.is_empty(), "no equal-length witness for {g}");
        assert_eq!(observed, l1_set(&g, &cfg()).unwrap(), "L1 mismatch for {g}");

        // one step further every sequence has two distinct zero-sum lengths
        let mut all_two = true;
        for_each_multiset_of(&g, disc, &mut |s| {
            all_two &= length_spectrum(s, &Limits::default()).unwrap().len() >= 2;
        });
        assert!(all_two, "disc({g}) is not minimal-forcing");
    }
}

#[test]
fn extremal_enumeration_agrees_with_unpruned_enumeration() {
    let g = Group::new(2, 4).unwrap();
    let auts = g.automorphisms(&Limits::default()).unwrap();
    let disc = disc_bruteforce(&g, &cfg()).unwrap() as usize;

    let mut canonical_oracle = BTreeSet::new();
    for_each_multiset_of(&g, disc - 1, &mut |s| {
        if length_spectrum(s, &Limits::default()).unwrap().is_singleton() {
            canonical_oracle.insert(s.canonicalize(&auts));
        }
    });

    let reps = extremal_sequences(&g, &cfg()).unwrap();
    let rep_set: BTreeSet<Sequence> = reps.iter().cloned().collect();
    assert_eq!(rep_set.len(), reps.len(), "stream repeated an orbit");
    assert_eq!(rep_set, canonical_oracle, "orbit representatives differ");
}
