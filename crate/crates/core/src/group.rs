//! Arithmetic, element orders, generation tests and automorphism
//! enumeration for `G = C_{n1} (+) C_{n2}` with `n1 | n2`.

use std::fmt;

use crate::{Error, Limits, Result};

/// A finite abelian group of rank at most two in invariant-factor form.
///
/// `n2` is the exponent. Rank-1 (`n1 = 1`) and trivial groups are admitted
/// so the brute-force layers can be sanity-checked against cyclic cases.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Group {
    n1: u32,
    n2: u32,
}

/// An element stored as canonical residues `(a, b)` with `a < n1`, `b < n2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Element {
    pub a: u32,
    pub b: u32,
}

impl Element {
    pub const ZERO: Element = Element { a: 0, b: 0 };

    pub fn new(a: u32, b: u32) -> Element {
        Element { a, b }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}xC{}", self.n1, self.n2)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

impl Group {
    pub fn new(n1: u32, n2: u32) -> Result<Group> {
        if n1 == 0 || n2 == 0 || !n2.is_multiple_of(n1) {
            return Err(Error::InvalidGroup { n1, n2 });
        }
        Ok(Group { n1, n2 })
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn order(&self) -> usize {
        (self.n1 as usize) * (self.n2 as usize)
    }

    pub fn exponent(&self) -> u32 {
        self.n2
    }

    pub fn rank(&self) -> u32 {
        match (self.n1, self.n2) {
            (1, 1) => 0,
            (1, _) => 1,
            _ => 2,
        }
    }

    /// Reduces arbitrary integer coordinates into canonical residues.
    pub fn element(&self, a: i64, b: i64) -> Element {
        Element {
            a: a.rem_euclid(self.n1 as i64) as u32,
            b: b.rem_euclid(self.n2 as i64) as u32,
        }
    }

    /// Strict constructor: rejects out-of-range residues instead of reducing.
    pub fn checked_element(&self, a: u32, b: u32) -> Result<Element> {
        if a >= self.n1 || b >= self.n2 {
            return Err(Error::ElementOutOfRange { a, b, group: *self });
        }
        Ok(Element { a, b })
    }

    /// All elements in canonical enumeration order: `(a, b)` sorted by `a`,
    /// then `b`. This order defines element indices everywhere in the crate.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let n2 = self.n2;
        (0..self.n1).flat_map(move |a| (0..n2).map(move |b| Element { a, b }))
    }

    pub fn index_of(&self, g: Element) -> usize {
        (g.a as usize) * (self.n2 as usize) + g.b as usize
    }

    pub fn element_at(&self, idx: usize) -> Element {
        let n2 = self.n2 as usize;
        Element {
            a: (idx / n2) as u32,
            b: (idx % n2) as u32,
        }
    }

    pub fn add(&self, g: Element, h: Element) -> Element {
        let mut a = g.a + h.a;
        if a >= self.n1 {
            a -= self.n1;
        }
        let mut b = g.b + h.b;
        if b >= self.n2 {
            b -= self.n2;
        }
        Element { a, b }
    }

    pub fn neg(&self, g: Element) -> Element {
        self.scale(-1, g)
    }

    pub fn sub(&self, g: Element, h: Element) -> Element {
        self.add(g, self.neg(h))
    }

    /// `k . g` for any integer `k`; `scale(-1, g)` is the inverse of `g`.
    pub fn scale(&self, k: i64, g: Element) -> Element {
        self.element(k * g.a as i64, k * g.b as i64)
    }

    /// Smallest `k >= 1` with `k . g = 0`.
    pub fn order_of(&self, g: Element) -> u32 {
        lcm(self.n1 / gcd(g.a, self.n1), self.n2 / gcd(g.b, self.n2))
    }

    /// True iff the integer combinations of `g1` and `g2` exhaust the group.
    pub fn generates(&self, g1: Element, g2: Element) -> bool {
        self.span_size(g1, g2) == self.order()
    }

    fn span_size(&self, g1: Element, g2: Element) -> usize {
        debug_assert!(self.order() <= 64);
        let mut seen = 0u64;
        let o1 = self.order_of(g1);
        let o2 = self.order_of(g2);
        let mut x = Element::ZERO;
        for _ in 0..o1 {
            let mut y = x;
            for _ in 0..o2 {
                seen |= 1u64 << self.index_of(y);
                y = self.add(y, g2);
            }
            x = self.add(x, g1);
        }
        seen.count_ones() as usize
    }

    /// A basis in the invariant-factor sense: a generating pair whose orders
    /// are exactly `{n1, n2}` and multiply to the group order.
    pub fn is_basis(&self, e1: Element, e2: Element) -> bool {
        let (o1, o2) = (self.order_of(e1), self.order_of(e2));
        (o1 as u64) * (o2 as u64) == self.order() as u64
            && (o1.min(o2), o1.max(o2)) == (self.n1, self.n2)
            && self.generates(e1, e2)
    }

    /// Exponent table of the cyclic subgroup generated by `g`:
    /// `table[index_of(x)] = Some(k)` iff `x = k . g` with `k` in
    /// `[0, ord(g) - 1]`, `None` for elements outside `<g>`.
    pub fn dlog_table(&self, g: Element) -> Vec<Option<u32>> {
        let mut table = vec![None; self.order()];
        let mut x = Element::ZERO;
        for k in 0..self.order_of(g) {
            table[self.index_of(x)] = Some(k);
            x = self.add(x, g);
        }
        table
    }

    /// Complete automorphism list, found by enumerating candidate images
    /// `(x, y)` of the standard basis `e1 = (1,0)`, `e2 = (0,1)` with
    /// `n1 . x = 0` and keeping the candidates whose induced endomorphism
    /// is a bijection.
    pub fn automorphisms(&self, limits: &Limits) -> Result<AutSet> {
        let order = self.order();
        let max = limits.effective_group_bound();
        if order > max {
            return Err(Error::GroupTooLarge { order, max });
        }
        let mut maps = Vec::new();
        let mut perms = Vec::new();
        for x in self.elements() {
            if self.scale(self.n1 as i64, x) != Element::ZERO {
                continue;
            }
            for y in self.elements() {
                let candidate = Automorphism {
                    image_e1: x,
                    image_e2: y,
                };
                if let Some(perm) = self.bijective_perm(&candidate) {
                    maps.push(candidate);
                    perms.push(perm);
                }
            }
        }
        let inv_perms = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0u8; order];
                for (i, &img) in p.iter().enumerate() {
                    inv[img as usize] = i as u8;
                }
                inv
            })
            .collect();
        Ok(AutSet {
            group: *self,
            maps,
            perms,
            inv_perms,
        })
    }

    fn bijective_perm(&self, phi: &Automorphism) -> Option<Vec<u8>> {
        let order = self.order();
        let mut seen = 0u64;
        let mut perm = vec![0u8; order];
        for (idx, g) in self.elements().enumerate() {
            let img = self.index_of(phi.apply(self, g));
            if seen & (1u64 << img) != 0 {
                return None;
            }
            seen |= 1u64 << img;
            perm[idx] = img as u8;
        }
        Some(perm)
    }

    /// Index permutation of the translation `x -> x + e`.
    pub(crate) fn translation_perm(&self, e: Element) -> Vec<u8> {
        self.elements()
            .map(|g| self.index_of(self.add(g, e)) as u8)
            .collect()
    }
}

/// An automorphism stored as the images of the standard basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Automorphism {
    pub image_e1: Element,
    pub image_e2: Element,
}

impl Automorphism {
    pub fn apply(&self, g: &Group, x: Element) -> Element {
        g.add(
            g.scale(x.a as i64, self.image_e1),
            g.scale(x.b as i64, self.image_e2),
        )
    }
}

/// The full automorphism group, with each map's action on element indices
/// precomputed as a permutation.
#[derive(Clone, Debug)]
pub struct AutSet {
    group: Group,
    maps: Vec<Automorphism>,
    perms: Vec<Vec<u8>>,
    inv_perms: Vec<Vec<u8>>,
}

impl AutSet {
    pub fn group(&self) -> Group {
        self.group
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[Automorphism] {
        &self.maps
    }

    /// `perm(i)[idx]` is the index of the image of element `idx`.
    pub fn perm(&self, i: usize) -> &[u8] {
        &self.perms[i]
    }

    pub fn inv_perm(&self, i: usize) -> &[u8] {
        &self.inv_perms[i]
    }

    pub fn contains(&self, phi: &Automorphism) -> bool {
        self.maps.iter().any(|m| m == phi)
    }
}
