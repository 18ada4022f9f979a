//! The structural forms of extremal equal-length sequences and the minimal
//! zero-sum classification, with witness search by exhaustion over
//! generating pairs.
//!
//! All matchers work the same way: enumerate every ordered pair of group
//! elements satisfying the form's generation and order constraints, solve
//! for the remaining parameters by direct multiset comparison, and accept a
//! candidate only if instantiating it reproduces the sequence exactly.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::group::{Element, Group};
use crate::sequence::Sequence;
use crate::{Error, Result};

/// Identifier of one of the five structural forms over `G = C_n (+) C_nm`.
///
/// With a generating pair `{g1, g2}`, `ord(g2) = nm`:
///
/// 1. `g2^(2nm-1) * prod_i (x_i g2 + g1)`, `ord(g1) = n`, `x_i in [0, nm-1]`
/// 2. `g1^(n-2) * g2^(2nm-1) * (-(n-1) g1 + g2)`
/// 3. `g1^(n-1) * g2^(2nm-1)`
/// 4. `g1^(2nm-1) * prod_i (-y_i g1 + g2)`, `ord(g1) = nm`, `sum y_i <= n-1`
/// 5. `g1^(sn+tn-1) * g2^(2nm+n(1-s)-tn-1)`, `ord(g1) = nm`, `s in [1,m]`,
///    `t in [0,m]`
///
/// Every instance has length `n + 2nm - 2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FormId {
    Form1,
    Form2,
    Form3,
    Form4,
    Form5,
}

impl FormId {
    pub const ALL: [FormId; 5] = [
        FormId::Form1,
        FormId::Form2,
        FormId::Form3,
        FormId::Form4,
        FormId::Form5,
    ];

    pub fn as_u8(self) -> u8 {
        match self {
            FormId::Form1 => 1,
            FormId::Form2 => 2,
            FormId::Form3 => 3,
            FormId::Form4 => 4,
            FormId::Form5 => 5,
        }
    }

    pub fn from_u8(v: u8) -> Option<FormId> {
        FormId::ALL.get(v.checked_sub(1)? as usize).copied()
    }
}

/// A subset of the five forms, used to mask the matcher in mutation tests.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FormSet(u8);

impl FormSet {
    pub fn all() -> FormSet {
        FormSet(0b11111)
    }

    pub fn empty() -> FormSet {
        FormSet(0)
    }

    pub fn without(self, form: FormId) -> FormSet {
        FormSet(self.0 & !(1 << (form.as_u8() - 1)))
    }

    pub fn with(self, form: FormId) -> FormSet {
        FormSet(self.0 | 1 << (form.as_u8() - 1))
    }

    pub fn contains(self, form: FormId) -> bool {
        self.0 & (1 << (form.as_u8() - 1)) != 0
    }
}

impl Default for FormSet {
    fn default() -> Self {
        FormSet::all()
    }
}

/// Form-dependent parameters. The exponent lists are multisets and are kept
/// sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum FormParams {
    None,
    Xs(Vec<u32>),
    Ys(Vec<u32>),
    St { s: u32, t: u32 },
}

/// A fully instantiable witness for one form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FormSpec {
    pub form: FormId,
    pub g1: Element,
    pub g2: Element,
    pub params: FormParams,
}

/// A witness returned by the matcher; instantiating it reproduces the
/// matched sequence exactly.
pub type FormMatch = FormSpec;

impl FormSpec {
    pub fn to_json(&self) -> Value {
        let params = match &self.params {
            FormParams::None => json!({}),
            FormParams::Xs(xs) => json!({ "xs": xs }),
            FormParams::Ys(ys) => json!({ "ys": ys }),
            FormParams::St { s, t } => json!({ "s": s, "t": t }),
        };
        json!({
            "form": self.form.as_u8(),
            "g1": [self.g1.a, self.g1.b],
            "g2": [self.g2.a, self.g2.b],
            "params": params,
        })
    }
}

/// Witness for the minimal zero-sum classification at length `n1 + n2 - 1`.
///
/// `Basis`: `e_j^(ord(e_j)-1) * prod_nu (x_nu e_j + e_k)` over a basis
/// `(e_j, e_k)`, with `x_nu in [0, ord(e_j)-1]` and
/// `sum x_nu = 1 (mod ord(e_j))`.
///
/// `Generating`: `g1^(s n1 - 1) * prod_nu (-x_nu g1 + g2)` over a generating
/// pair with `ord(g2) = n2`, `x_nu in [0, n1-1]`, `sum x_nu = n1 - 1`,
/// `s in [1, n2/n1]`, and `s = 1` or `n1 g1 = n1 g2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum SchmidSpec {
    Basis {
        e_j: Element,
        e_k: Element,
        xs: Vec<u32>,
    },
    Generating {
        g1: Element,
        g2: Element,
        s: u32,
        xs: Vec<u32>,
    },
}

impl SchmidSpec {
    pub fn to_json(&self) -> Value {
        match self {
            SchmidSpec::Basis { e_j, e_k, xs } => json!({
                "variant": "basis",
                "e_j": [e_j.a, e_j.b],
                "e_k": [e_k.a, e_k.b],
                "xs": xs,
            }),
            SchmidSpec::Generating { g1, g2, s, xs } => json!({
                "variant": "generating",
                "g1": [g1.a, g1.b],
                "g2": [g2.a, g2.b],
                "s": s,
                "xs": xs,
            }),
        }
    }
}

/// `(n, m, nm)` for `G = C_n (+) C_nm` with `n, m >= 2`, or `None` when the
/// group falls outside the classification's hypothesis.
pub fn classification_params(g: &Group) -> Option<(u32, u32, u32)> {
    let n = g.n1();
    let nm = g.n2();
    if n < 2 {
        return None;
    }
    let m = nm / n;
    if m < 2 {
        return None;
    }
    Some((n, m, nm))
}

/// The common length `n + 2nm - 2` of every form instance over `g`.
pub fn extremal_length(g: &Group) -> usize {
    (g.n1() + 2 * g.n2() - 2) as usize
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::InvalidFormSpec(msg.into())
}

/// Builds the sequence a form spec denotes, validating its invariants.
pub fn instantiate_form(g: &Group, spec: &FormSpec) -> Result<Sequence> {
    let (n, m, nm) = classification_params(g).ok_or(Error::DegenerateGroup { group: *g })?;
    g.checked_element(spec.g1.a, spec.g1.b)?;
    g.checked_element(spec.g2.a, spec.g2.b)?;
    if !g.generates(spec.g1, spec.g2) {
        return Err(spec_err(format!(
            "{{{}, {}}} does not generate {g}",
            spec.g1, spec.g2
        )));
    }
    if g.order_of(spec.g2) != nm {
        return Err(spec_err(format!("ord(g2) must be {nm}")));
    }
    let mut entries: Vec<(Element, u32)> = Vec::new();
    match (&spec.form, &spec.params) {
        (FormId::Form1, FormParams::Xs(xs)) => {
            if g.order_of(spec.g1) != n {
                return Err(spec_err(format!("form 1 requires ord(g1) = {n}")));
            }
            if xs.len() != (n - 1) as usize || xs.iter().any(|&x| x >= nm) {
                return Err(spec_err(format!(
                    "form 1 takes {} exponents in [0, {}]",
                    n - 1,
                    nm - 1
                )));
            }
            entries.push((spec.g2, 2 * nm - 1));
            for &x in xs {
                entries.push((g.add(g.scale(x as i64, spec.g2), spec.g1), 1));
            }
        }
        (FormId::Form2, FormParams::None) => {
            entries.push((spec.g1, n - 2));
            entries.push((spec.g2, 2 * nm - 1));
            entries.push((g.add(g.scale(-((n - 1) as i64), spec.g1), spec.g2), 1));
        }
        (FormId::Form3, FormParams::None) => {
            entries.push((spec.g1, n - 1));
            entries.push((spec.g2, 2 * nm - 1));
        }
        (FormId::Form4, FormParams::Ys(ys)) => {
            if g.order_of(spec.g1) != nm {
                return Err(spec_err(format!("form 4 requires ord(g1) = {nm}")));
            }
            if ys.len() != (n - 1) as usize || ys.iter().any(|&y| y >= n) {
                return Err(spec_err(format!(
                    "form 4 takes {} exponents in [0, {}]",
                    n - 1,
                    n - 1
                )));
            }
            if ys.iter().sum::<u32>() > n - 1 {
                return Err(spec_err(format!(
                    "form 4 exponents must sum to at most {}",
                    n - 1
                )));
            }
            entries.push((spec.g1, 2 * nm - 1));
            for &y in ys {
                entries.push((g.add(g.scale(-(y as i64), spec.g1), spec.g2), 1));
            }
        }
        (FormId::Form5, &FormParams::St { s, t }) => {
            if g.order_of(spec.g1) != nm {
                return Err(spec_err(format!("form 5 requires ord(g1) = {nm}")));
            }
            if !(1..=m).contains(&s) || t > m {
                return Err(spec_err(format!(
                    "form 5 takes s in [1, {m}] and t in [0, {m}]"
                )));
            }
            let e1 = (s as i64 + t as i64) * n as i64 - 1;
            let e2 = 2 * (nm as i64) + (n as i64) * (1 - s as i64) - (t as i64) * (n as i64) - 1;
            if e1 < 0 || e2 < 0 {
                return Err(spec_err("form 5 exponents must be non-negative"));
            }
            entries.push((spec.g1, e1 as u32));
            entries.push((spec.g2, e2 as u32));
        }
        _ => {
            return Err(spec_err(format!(
                "parameters do not fit form {}",
                spec.form.as_u8()
            )))
        }
    }
    let s = Sequence::from_entries(*g, &entries)?;
    debug_assert_eq!(s.len(), extremal_length(g));
    Ok(s)
}

/// Multiset of discrete logs of the non-`pivot` part of `s` with respect to
/// the coset `base + <pivot_gen>`: for each remaining element `h`, the
/// unique `x` with `x . gen = h - offset`, or `None` when some element falls
/// outside the coset. `s` must contain `pivot` with multiplicity exactly
/// `pivot_mult`.
fn coset_exponents(
    g: &Group,
    s: &Sequence,
    pivot: Element,
    pivot_mult: u32,
    gen: Element,
    offset: Element,
) -> Option<Vec<u32>> {
    if s.multiplicity(pivot) != pivot_mult {
        return None;
    }
    let dlog = g.dlog_table(gen);
    let mut xs = Vec::new();
    for (h, m) in s.entries() {
        if h == pivot {
            continue;
        }
        let x = dlog[g.index_of(g.sub(h, offset))]?;
        for _ in 0..m {
            xs.push(x);
        }
    }
    xs.sort_unstable();
    Some(xs)
}

/// All form witnesses for `s`, using only the forms in `enabled`.
///
/// Exhausts ordered pairs `(g1, g2)` with the per-form order and generation
/// constraints; an empty result is a valid outcome. Groups outside the
/// classification hypothesis match nothing.
pub fn match_theorem_forms_filtered(s: &Sequence, enabled: FormSet) -> Vec<FormMatch> {
    let g = s.group();
    let Some((n, m, nm)) = classification_params(&g) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let elements: Vec<Element> = g.elements().collect();
    for &g1 in &elements {
        for &g2 in &elements {
            if g.order_of(g2) != nm || !g.generates(g1, g2) {
                continue;
            }
            if enabled.contains(FormId::Form1) && g.order_of(g1) == n {
                if let Some(xs) = coset_exponents(&g, s, g2, 2 * nm - 1, g2, g1) {
                    push_verified(
                        &g,
                        s,
                        FormSpec {
                            form: FormId::Form1,
                            g1,
                            g2,
                            params: FormParams::Xs(xs),
                        },
                        &mut out,
                    );
                }
            }
            if enabled.contains(FormId::Form2) {
                push_verified(
                    &g,
                    s,
                    FormSpec {
                        form: FormId::Form2,
                        g1,
                        g2,
                        params: FormParams::None,
                    },
                    &mut out,
                );
            }
            if enabled.contains(FormId::Form3) {
                push_verified(
                    &g,
                    s,
                    FormSpec {
                        form: FormId::Form3,
                        g1,
                        g2,
                        params: FormParams::None,
                    },
                    &mut out,
                );
            }
            if enabled.contains(FormId::Form4) && g.order_of(g1) == nm {
                // terms are -y g1 + g2, so dlogs are taken of g2 - h
                if let Some(ys) = coset_exponents_negated(&g, s, g1, 2 * nm - 1, g1, g2) {
                    if ys.iter().sum::<u32>() < n {
                        push_verified(
                            &g,
                            s,
                            FormSpec {
                                form: FormId::Form4,
                                g1,
                                g2,
                                params: FormParams::Ys(ys),
                            },
                            &mut out,
                        );
                    }
                }
            }
            if enabled.contains(FormId::Form5) && g.order_of(g1) == nm {
                let a = s.multiplicity(g1);
                let b = s.multiplicity(g2);
                if g1 != g2
                    && a >= 1
                    && b >= 1
                    && (a as usize + b as usize) == s.len()
                    && (a + 1).is_multiple_of(n)
                {
                    let u = (a + 1) / n;
                    for cand_s in 1..=m {
                        if cand_s > u {
                            break;
                        }
                        let t = u - cand_s;
                        if t > m {
                            continue;
                        }
                        push_verified(
                            &g,
                            s,
                            FormSpec {
                                form: FormId::Form5,
                                g1,
                                g2,
                                params: FormParams::St { s: cand_s, t },
                            },
                            &mut out,
                        );
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn coset_exponents_negated(
    g: &Group,
    s: &Sequence,
    pivot: Element,
    pivot_mult: u32,
    gen: Element,
    offset: Element,
) -> Option<Vec<u32>> {
    if s.multiplicity(pivot) != pivot_mult {
        return None;
    }
    let dlog = g.dlog_table(gen);
    let mut xs = Vec::new();
    for (h, m) in s.entries() {
        if h == pivot {
            continue;
        }
        let x = dlog[g.index_of(g.sub(offset, h))]?;
        for _ in 0..m {
            xs.push(x);
        }
    }
    xs.sort_unstable();
    Some(xs)
}

fn push_verified(g: &Group, s: &Sequence, spec: FormSpec, out: &mut Vec<FormSpec>) {
    if let Ok(candidate) = instantiate_form(g, &spec) {
        if &candidate == s {
            out.push(spec);
        }
    }
}

/// All form witnesses for `s`, with every form enabled.
pub fn match_theorem_forms(s: &Sequence) -> Vec<FormMatch> {
    match_theorem_forms_filtered(s, FormSet::all())
}

/// Builds the sequence a Schmid spec denotes, validating its invariants.
pub fn instantiate_schmid(g: &Group, spec: &SchmidSpec) -> Result<Sequence> {
    if g.rank() < 2 {
        return Err(spec_err(format!("{g} has rank < 2")));
    }
    let (n1, n2) = (g.n1(), g.n2());
    let mut entries: Vec<(Element, u32)> = Vec::new();
    match spec {
        SchmidSpec::Basis { e_j, e_k, xs } => {
            if !g.is_basis(*e_j, *e_k) {
                return Err(spec_err(format!("({e_j}, {e_k}) is not a basis of {g}")));
            }
            let ord_j = g.order_of(*e_j);
            let ord_k = g.order_of(*e_k);
            if xs.len() != ord_k as usize || xs.iter().any(|&x| x >= ord_j) {
                return Err(spec_err(format!(
                    "basis variant takes {ord_k} exponents in [0, {}]",
                    ord_j - 1
                )));
            }
            if xs.iter().sum::<u32>() % ord_j != 1 % ord_j {
                return Err(spec_err(format!(
                    "basis variant exponents must sum to 1 mod {ord_j}"
                )));
            }
            entries.push((*e_j, ord_j - 1));
            for &x in xs {
                entries.push((g.add(g.scale(x as i64, *e_j), *e_k), 1));
            }
        }
        SchmidSpec::Generating { g1, g2, s, xs } => {
            if !g.generates(*g1, *g2) || g.order_of(*g2) != n2 {
                return Err(spec_err(format!(
                    "generating variant needs a generating pair with ord(g2) = {n2}"
                )));
            }
            if !(1..=n2 / n1).contains(s) {
                return Err(spec_err(format!(
                    "generating variant takes s in [1, {}]",
                    n2 / n1
                )));
            }
            if *s != 1 && g.scale(n1 as i64, *g1) != g.scale(n1 as i64, *g2) {
                return Err(spec_err("generating variant needs s = 1 or n1 g1 = n1 g2"));
            }
            let term_count = (n2 as i64 + (1 - *s as i64) * n1 as i64) as usize;
            if xs.len() != term_count || xs.iter().any(|&x| x >= n1) {
                return Err(spec_err(format!(
                    "generating variant takes {term_count} exponents in [0, {}]",
                    n1 - 1
                )));
            }
            if xs.iter().sum::<u32>() != n1 - 1 {
                return Err(spec_err(format!(
                    "generating variant exponents must sum to {}",
                    n1 - 1
                )));
            }
            entries.push((*g1, s * n1 - 1));
            for &x in xs {
                entries.push((g.add(g.scale(-(x as i64), *g1), *g2), 1));
            }
        }
    }
    let s = Sequence::from_entries(*g, &entries)?;
    debug_assert_eq!(s.len(), (n1 + n2 - 1) as usize);
    Ok(s)
}

/// All Schmid witnesses for `s` (both variants), found by exhausting bases
/// and generating pairs. Rank-1 groups match nothing.
pub fn match_schmid(s: &Sequence) -> Vec<SchmidSpec> {
    let g = s.group();
    if g.rank() < 2 {
        return Vec::new();
    }
    let (n1, n2) = (g.n1(), g.n2());
    let mut out = Vec::new();
    let elements: Vec<Element> = g.elements().collect();
    for &u in &elements {
        for &v in &elements {
            if g.is_basis(u, v) {
                let ord_u = g.order_of(u);
                if let Some(xs) = coset_exponents(&g, s, u, ord_u - 1, u, v) {
                    let spec = SchmidSpec::Basis { e_j: u, e_k: v, xs };
                    if let Ok(candidate) = instantiate_schmid(&g, &spec) {
                        if candidate == *s {
                            out.push(spec);
                        }
                    }
                }
            }
            if g.generates(u, v) && g.order_of(v) == n2 {
                let a = s.multiplicity(u);
                if (a + 1).is_multiple_of(n1) {
                    let cand_s = (a + 1) / n1;
                    if (1..=n2 / n1).contains(&cand_s) {
                        if let Some(xs) = coset_exponents_negated(&g, s, u, a, u, v) {
                            let spec = SchmidSpec::Generating {
                                g1: u,
                                g2: v,
                                s: cand_s,
                                xs,
                            };
                            if let Ok(candidate) = instantiate_schmid(&g, &spec) {
                                if candidate == *s {
                                    out.push(spec);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Per-form witness counts, used by reports.
pub fn forms_matched(matches: &[FormMatch]) -> BTreeMap<u8, usize> {
    let mut out = BTreeMap::new();
    for m in matches {
        *out.entry(m.form.as_u8()).or_insert(0) += 1;
    }
    out
}
