//! Brute-force reference implementations.
//!
//! Everything here is deliberately naive — repeated addition, breadth-first
//! closure, full `2^|S|` subset enumeration — and shares no code with the
//! engines it cross-checks. The test suites treat these as independent
//! oracles; nothing in the crate's production paths calls into this module.

use std::collections::BTreeSet;

use crate::group::{AutSet, Element, Group};
use crate::sequence::Sequence;

pub fn scale_by_repeated_addition(g: &Group, k: i64, e: Element) -> Element {
    let mut acc = Element::ZERO;
    let steps = k.rem_euclid(g.order_of(e) as i64);
    for _ in 0..steps {
        acc = g.add(acc, e);
    }
    acc
}

pub fn order_by_repeated_addition(g: &Group, e: Element) -> u32 {
    let mut acc = e;
    let mut k = 1;
    while acc != Element::ZERO {
        acc = g.add(acc, e);
        k += 1;
    }
    k
}

/// Subgroup generated by `{g1, g2}`, computed as a breadth-first closure
/// under addition rather than by double-looping over exponents.
pub fn span_by_closure(g: &Group, g1: Element, g2: Element) -> BTreeSet<Element> {
    let mut seen: BTreeSet<Element> = BTreeSet::new();
    let mut frontier = vec![Element::ZERO];
    seen.insert(Element::ZERO);
    while let Some(x) = frontier.pop() {
        for step in [g1, g2] {
            let y = g.add(x, step);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Exact reachability of (subsequence length, subsequence sum) pairs by
/// enumerating all `2^|S|` subsets of the expanded element list.
///
/// `table[k]` is the set of sums attained by exactly-`k`-term subsequences.
pub fn subset_reach_table(s: &Sequence) -> Vec<BTreeSet<Element>> {
    let g = s.group();
    let items = s.expanded();
    assert!(items.len() <= 24, "subset oracle is exponential");
    let mut table = vec![BTreeSet::new(); items.len() + 1];
    for mask in 0u32..1 << items.len() {
        let mut sum = Element::ZERO;
        for (i, &e) in items.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = g.add(sum, e);
            }
        }
        table[mask.count_ones() as usize].insert(sum);
    }
    table
}

/// Lengths `k >= 1` at which some `k`-term subsequence sums to zero.
pub fn subset_spectrum(s: &Sequence) -> BTreeSet<usize> {
    subset_reach_table(s)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, sums)| sums.contains(&Element::ZERO))
        .map(|(k, _)| k)
        .collect()
}

pub fn subset_sums_exactly(s: &Sequence, k: usize) -> BTreeSet<Element> {
    subset_reach_table(s)[k].clone()
}

pub fn subset_sums_at_least(s: &Sequence, k: usize) -> BTreeSet<Element> {
    let table = subset_reach_table(s);
    let mut out = BTreeSet::new();
    for row in table.iter().skip(k) {
        out.extend(row.iter().copied());
    }
    out
}

pub fn subset_sums_all(s: &Sequence) -> BTreeSet<Element> {
    subset_sums_at_least(s, 1)
}

/// The full automorphism orbit of a sequence.
pub fn orbit(s: &Sequence, auts: &AutSet) -> Vec<Sequence> {
    let mut out: Vec<Sequence> = auts
        .maps()
        .iter()
        .map(|phi| s.apply_automorphism(phi))
        .collect();
    out.sort();
    out.dedup();
    out
}
