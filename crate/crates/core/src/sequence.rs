//! Multiset algebra for sequences over a group: construction, multiplicity
//! access, sums, subsequence removal, and orbit canonicalization under the
//! automorphism group.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::group::{AutSet, Automorphism, Element, Group};
use crate::{Error, Result};

/// An unordered multiset of group elements, stored as a dense multiplicity
/// vector in canonical element order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sequence {
    group: Group,
    mult: Vec<u32>,
    len: u32,
}

/// The lexicographically smallest multiplicity vector in the automorphism
/// orbit of a sequence. Two sequences have equal keys iff they lie in the
/// same orbit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CanonicalKey(pub Vec<u32>);

impl PartialOrd for Sequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sequence {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.group.n1(), self.group.n2(), &self.mult).cmp(&(
            other.group.n1(),
            other.group.n2(),
            &other.mult,
        ))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "(empty)");
        }
        let mut first = true;
        for (e, m) in self.entries() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{e}^{m}")?;
            first = false;
        }
        Ok(())
    }
}

impl Sequence {
    pub fn empty(group: Group) -> Sequence {
        Sequence {
            group,
            mult: vec![0; group.order()],
            len: 0,
        }
    }

    /// Builds a sequence from `(element, multiplicity)` entries; duplicate
    /// entries are summed, zero multiplicities are allowed and ignored.
    pub fn from_entries(group: Group, entries: &[(Element, u32)]) -> Result<Sequence> {
        let mut s = Sequence::empty(group);
        for &(e, m) in entries {
            group.checked_element(e.a, e.b)?;
            s.mult[group.index_of(e)] += m;
            s.len += m;
        }
        Ok(s)
    }

    pub(crate) fn from_mult(group: Group, mult: Vec<u32>) -> Sequence {
        debug_assert_eq!(mult.len(), group.order());
        let len = mult.iter().sum();
        Sequence { group, mult, len }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Multiplicity of `g` in the sequence.
    pub fn multiplicity(&self, g: Element) -> u32 {
        self.mult[self.group.index_of(g)]
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn support(&self) -> Vec<Element> {
        self.entries().into_iter().map(|(e, _)| e).collect()
    }

    /// Entries `(element, multiplicity > 0)` in canonical element order.
    pub fn entries(&self) -> Vec<(Element, u32)> {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (self.group.element_at(i), m))
            .collect()
    }

    /// The sequence as a flat element list (respecting multiplicities).
    pub fn expanded(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.len());
        for (e, m) in self.entries() {
            for _ in 0..m {
                out.push(e);
            }
        }
        out
    }

    /// Sum of the sequence.
    pub fn sigma(&self) -> Element {
        let mut acc = Element::ZERO;
        for (e, m) in self.entries() {
            acc = self.group.add(acc, self.group.scale(m as i64, e));
        }
        acc
    }

    pub fn is_subsequence_of(&self, host: &Sequence) -> bool {
        self.group == host.group && self.mult.iter().zip(host.mult.iter()).all(|(a, b)| a <= b)
    }

    /// Componentwise multiplicity subtraction; errors unless `t` is a
    /// subsequence of `self`.
    pub fn remove(&self, t: &Sequence) -> Result<Sequence> {
        if self.group != t.group {
            return Err(Error::GroupMismatch {
                left: self.group,
                right: t.group,
            });
        }
        let mut mult = self.mult.clone();
        for (i, (m, r)) in mult.iter_mut().zip(t.mult.iter()).enumerate() {
            if r > m {
                return Err(Error::NotSubsequence {
                    element: self.group.element_at(i),
                });
            }
            *m -= r;
        }
        Ok(Sequence::from_mult(self.group, mult))
    }

    /// Multiset union (multiplicity addition).
    pub fn combined(&self, t: &Sequence) -> Sequence {
        debug_assert_eq!(self.group, t.group);
        let mult = self
            .mult
            .iter()
            .zip(t.mult.iter())
            .map(|(a, b)| a + b)
            .collect();
        Sequence::from_mult(self.group, mult)
    }

    pub fn with_element(&self, e: Element, m: u32) -> Sequence {
        let mut out = self.clone();
        out.mult[self.group.index_of(e)] += m;
        out.len += m;
        out
    }

    pub fn apply_automorphism(&self, phi: &Automorphism) -> Sequence {
        let mut mult = vec![0u32; self.group.order()];
        for (i, &m) in self.mult.iter().enumerate() {
            let img = phi.apply(&self.group, self.group.element_at(i));
            mult[self.group.index_of(img)] += m;
        }
        Sequence::from_mult(self.group, mult)
    }

    fn permuted_mult(&self, inv_perm: &[u8]) -> Vec<u32> {
        // image[j] = mult[inv_perm[j]]
        inv_perm.iter().map(|&i| self.mult[i as usize]).collect()
    }

    /// The orbit representative with lexicographically smallest multiplicity
    /// vector. Idempotent.
    pub fn canonicalize(&self, auts: &AutSet) -> Sequence {
        debug_assert_eq!(auts.group(), self.group);
        let mut best = self.mult.clone();
        for i in 0..auts.len() {
            let candidate = self.permuted_mult(auts.inv_perm(i));
            if candidate < best {
                best = candidate;
            }
        }
        Sequence::from_mult(self.group, best)
    }

    pub fn canonical_key(&self, auts: &AutSet) -> CanonicalKey {
        CanonicalKey(self.canonicalize(auts).mult)
    }

    /// Fast check that `self` already equals its canonical form.
    pub fn is_canonical(&self, auts: &AutSet) -> bool {
        for i in 0..auts.len() {
            let inv = auts.inv_perm(i);
            for (&m, &pre) in self.mult.iter().zip(inv.iter()) {
                match self.mult[pre as usize].cmp(&m) {
                    Ordering::Less => return false,
                    Ordering::Greater => break,
                    Ordering::Equal => {}
                }
            }
        }
        true
    }

    /// JSON encoding shared with the CLI:
    /// `{"entries":[[a,b,mult],...],"group":[n1,n2]}` with entries sorted in
    /// canonical element order and zero multiplicities omitted.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .iter()
            .map(|(e, m)| json!([e.a, e.b, m]))
            .collect();
        json!({ "group": [self.group.n1(), self.group.n2()], "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Sequence> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::SequenceJson("expected an object".into()))?;
        let grp = obj
            .get("group")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::SequenceJson("missing \"group\" array".into()))?;
        if grp.len() != 2 {
            return Err(Error::SequenceJson("\"group\" must be [n1, n2]".into()));
        }
        let n1 = grp[0]
            .as_u64()
            .ok_or_else(|| Error::SequenceJson("group factors must be integers".into()))?;
        let n2 = grp[1]
            .as_u64()
            .ok_or_else(|| Error::SequenceJson("group factors must be integers".into()))?;
        let group = Group::new(n1 as u32, n2 as u32)?;
        let entries = obj
            .get("entries")
            .ok_or_else(|| Error::SequenceJson("missing \"entries\" array".into()))?;
        Self::from_json_entries(group, entries)
    }

    /// Parses the bare entries array `[[a,b,mult],...]` against a known
    /// group. Zero multiplicities and out-of-range residues are rejected.
    pub fn from_json_entries(group: Group, v: &Value) -> Result<Sequence> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::SequenceJson("expected an entries array".into()))?;
        let mut entries = Vec::with_capacity(arr.len());
        for item in arr {
            let triple = item
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::SequenceJson("each entry must be [a, b, mult]".into()))?;
            let nums: Vec<u64> = triple
                .iter()
                .map(|x| {
                    x.as_u64().ok_or_else(|| {
                        Error::SequenceJson("entries must hold non-negative integers".into())
                    })
                })
                .collect::<Result<_>>()?;
            if nums[2] == 0 {
                return Err(Error::SequenceJson(
                    "entries with multiplicity 0 are rejected".into(),
                ));
            }
            let e = group.checked_element(nums[0] as u32, nums[1] as u32)?;
            entries.push((e, nums[2] as u32));
        }
        Sequence::from_entries(group, &entries)
    }
}
