//! Dynamic-programming reachability of (subsequence length, subsequence sum)
//! pairs, and everything derived from it: subsum sets, the zero-sum length
//! spectrum, zero-sum-freeness, minimality, and the disjointness predicate
//! used by the structure certification.

use std::collections::BTreeSet;

use crate::group::{Element, Group};
use crate::sequence::Sequence;
use crate::{Error, Limits, Result};

/// Exact reachability table: `reach(k, g)` is true iff some subsequence with
/// exactly `k` terms sums to `g`.
///
/// Each row is a bitmask over element indices (one `u64` per row, which is
/// why the engine is capped at groups of order 64). Row 0 contains only the
/// identity; inserting an element `e` turns row `k` into
/// `row[k] | translate(row[k-1], e)`, and insertions never clear bits, so
/// every derived quantity is monotone under appending elements.
#[derive(Clone, Debug)]
pub struct SubsumTable {
    group: Group,
    sum: Element,
    rows: Vec<u64>,
}

/// The sorted set of lengths `k >= 1` at which a zero-sum subsequence exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LengthSpectrum {
    lengths: BTreeSet<usize>,
}

/// Projection modes for subsum sets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SumMode {
    Exactly(usize),
    AtLeast(usize),
    All,
}

pub(crate) fn translate(mask: u64, perm: &[u8]) -> u64 {
    let mut out = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        out |= 1u64 << perm[i];
        rest &= rest - 1;
    }
    out
}

pub(crate) fn appended_rows(rows: &[u64], perm: &[u8]) -> Vec<u64> {
    let mut out = Vec::with_capacity(rows.len() + 1);
    out.push(rows[0]);
    for pair in rows.windows(2) {
        out.push(pair[1] | translate(pair[0], perm));
    }
    out.push(translate(rows[rows.len() - 1], perm));
    out
}

impl SubsumTable {
    fn check_bounds(s: &Sequence, limits: &Limits) -> Result<()> {
        let order = s.group().order();
        let max = limits.effective_group_bound();
        if order > max {
            return Err(Error::GroupTooLarge { order, max });
        }
        if s.len() > limits.max_sequence_len {
            return Err(Error::SequenceTooLong {
                len: s.len(),
                max: limits.max_sequence_len,
            });
        }
        Ok(())
    }

    pub fn build(s: &Sequence, limits: &Limits) -> Result<SubsumTable> {
        Self::check_bounds(s, limits)?;
        let group = s.group();
        let mut rows = vec![1u64]; // identity has index 0
        for (e, m) in s.entries() {
            let perm = group.translation_perm(e);
            for _ in 0..m {
                rows = appended_rows(&rows, &perm);
            }
        }
        Ok(SubsumTable {
            group,
            sum: s.sigma(),
            rows,
        })
    }

    pub fn empty(group: Group) -> SubsumTable {
        SubsumTable {
            group,
            sum: Element::ZERO,
            rows: vec![1u64],
        }
    }

    /// Persistent insertion of one more element.
    pub fn appended(&self, e: Element) -> SubsumTable {
        let perm = self.group.translation_perm(e);
        SubsumTable {
            group: self.group,
            sum: self.group.add(self.sum, e),
            rows: appended_rows(&self.rows, &perm),
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    /// Length of the underlying sequence.
    pub fn len(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sum(&self) -> Element {
        self.sum
    }

    pub fn reach(&self, k: usize, g: Element) -> bool {
        k < self.rows.len() && self.rows[k] & (1u64 << self.group.index_of(g)) != 0
    }

    pub fn zero_sum_lengths(&self) -> Vec<usize> {
        (1..self.rows.len())
            .filter(|&k| self.rows[k] & 1 != 0)
            .collect()
    }

    fn decode(&self, mask: u64) -> Vec<Element> {
        (0..self.group.order())
            .filter(|&i| mask & (1u64 << i) != 0)
            .map(|i| self.group.element_at(i))
            .collect()
    }

    /// Sums attained by exactly-`k`-term subsequences; `k` must lie in
    /// `[1, |S|]`.
    pub fn sums_exactly(&self, k: usize) -> Result<Vec<Element>> {
        if k == 0 || k > self.len() {
            return Err(Error::LengthClassOutOfRange { k, len: self.len() });
        }
        Ok(self.decode(self.rows[k]))
    }

    /// Sums attained by subsequences with at least `k` terms. Empty when
    /// `k` exceeds the sequence length (the union is over no rows).
    pub fn sums_at_least(&self, k: usize) -> Vec<Element> {
        let mask = self
            .rows
            .iter()
            .skip(k.max(1))
            .fold(0u64, |acc, row| acc | row);
        self.decode(mask)
    }

    /// All nonempty subsums.
    pub fn sums_all(&self) -> Vec<Element> {
        self.sums_at_least(1)
    }
}

impl LengthSpectrum {
    pub fn of(s: &Sequence, limits: &Limits) -> Result<LengthSpectrum> {
        let table = SubsumTable::build(s, limits)?;
        Ok(LengthSpectrum {
            lengths: table.zero_sum_lengths().into_iter().collect(),
        })
    }

    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> LengthSpectrum {
        LengthSpectrum {
            lengths: lengths.into_iter().collect(),
        }
    }

    pub fn lengths(&self) -> &BTreeSet<usize> {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.lengths.len() == 1
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lengths.contains(&k)
    }
}

/// Computes the zero-sum length spectrum of `s`.
pub fn length_spectrum(s: &Sequence, limits: &Limits) -> Result<LengthSpectrum> {
    LengthSpectrum::of(s, limits)
}

/// True iff `s` has zero-sum subsequences of two distinct lengths.
///
/// The table is grown one element at a time and the construction aborts as
/// soon as two distinct lengths reach zero, which is sound because
/// insertions only ever add reachable pairs.
pub fn has_two_lengths(s: &Sequence, limits: &Limits) -> Result<bool> {
    SubsumTable::check_bounds(s, limits)?;
    let group = s.group();
    let mut rows = vec![1u64];
    let mut seen: Option<usize> = None;
    for (e, m) in s.entries() {
        let perm = group.translation_perm(e);
        for _ in 0..m {
            rows = appended_rows(&rows, &perm);
            for (k, row) in rows.iter().enumerate().skip(1) {
                if row & 1 == 0 {
                    continue;
                }
                match seen {
                    Some(first) if first != k => return Ok(true),
                    None => seen = Some(k),
                    _ => {}
                }
            }
        }
    }
    Ok(false)
}

/// Subsum sets in the requested mode.
pub fn sum_sets(s: &Sequence, mode: SumMode, limits: &Limits) -> Result<Vec<Element>> {
    let table = SubsumTable::build(s, limits)?;
    match mode {
        SumMode::Exactly(k) => table.sums_exactly(k),
        SumMode::AtLeast(k) => {
            if k == 0 || k > table.len() {
                return Err(Error::LengthClassOutOfRange {
                    k,
                    len: table.len(),
                });
            }
            Ok(table.sums_at_least(k))
        }
        SumMode::All => Ok(table.sums_all()),
    }
}

/// True iff `s` has no nonempty zero-sum subsequence.
pub fn is_zero_sum_free(s: &Sequence, limits: &Limits) -> Result<bool> {
    let table = SubsumTable::build(s, limits)?;
    Ok(table.zero_sum_lengths().is_empty())
}

/// True iff `s` is zero-sum and has no proper nonempty zero-sum subsequence.
pub fn is_minimal_zero_sum(s: &Sequence, limits: &Limits) -> Result<bool> {
    if s.is_empty() || s.sigma() != Element::ZERO {
        return Ok(false);
    }
    let table = SubsumTable::build(s, limits)?;
    Ok(table.zero_sum_lengths() == vec![s.len()])
}

/// Disjointness predicate behind the structure certification: given a
/// nonempty zero-sum subsequence `t` of `s`, checks that no element of `t`
/// is attainable as a sum of two or more terms of `s` with `t` removed.
///
/// If it were, splicing that subsum in place of the matching term of `t`
/// would produce a longer zero-sum subsequence of `s`.
pub fn lemma31_holds(s: &Sequence, t: &Sequence, limits: &Limits) -> Result<bool> {
    if t.is_empty() || !t.is_subsequence_of(s) || t.sigma() != Element::ZERO {
        return Err(Error::NotZeroSumSubsequence);
    }
    let rest = s.remove(t)?;
    let table = SubsumTable::build(&rest, limits)?;
    let reachable: BTreeSet<Element> = table.sums_at_least(2).into_iter().collect();
    Ok(t.support().iter().all(|g| !reachable.contains(g)))
}

/// All nonempty zero-sum sub-multisets of `s`, in canonical order.
pub fn zero_sum_submultisets(s: &Sequence) -> Vec<Sequence> {
    let g = s.group();
    let entries = s.entries();
    let mut out = Vec::new();
    let mut picked = vec![0u32; entries.len()];

    fn rec(
        g: &Group,
        entries: &[(Element, u32)],
        picked: &mut Vec<u32>,
        pos: usize,
        sum: Element,
        size: u32,
        out: &mut Vec<Sequence>,
    ) {
        if pos == entries.len() {
            if size > 0 && sum == Element::ZERO {
                let pairs: Vec<(Element, u32)> = entries
                    .iter()
                    .zip(picked.iter())
                    .filter(|(_, &m)| m > 0)
                    .map(|(&(e, _), &m)| (e, m))
                    .collect();
                out.push(Sequence::from_entries(*g, &pairs).expect("valid elements"));
            }
            return;
        }
        let (e, max) = entries[pos];
        let mut acc = sum;
        for m in 0..=max {
            picked[pos] = m;
            rec(g, entries, picked, pos + 1, acc, size + m, out);
            acc = g.add(acc, e);
        }
        picked[pos] = 0;
    }

    rec(&g, &entries, &mut picked, 0, Element::ZERO, 0, &mut out);
    out.sort();
    out
}
