//! Zero-sum invariants of sequences over finite abelian groups of rank at
//! most two.
//!
//! A sequence over a group `G` is an unordered multiset of group elements.
//! This crate computes, for such sequences, the full table of (subsequence
//! length, subsequence sum) pairs by dynamic programming and derives from it
//! the zero-sum length spectrum, subsum sets, zero-sum-freeness and
//! minimality. On top of that engine it brute-forces the Davenport constant,
//! the two-distinct-lengths threshold `disc(G)`, and the extremal length set
//! `L1(G)`, enumerates — up to automorphism — the sequences of length
//! `disc(G) - 1` whose nonempty zero-sum subsequences all share one length,
//! and certifies that each of them matches one of five structural forms.

pub mod cache;
pub mod group;
pub mod oracle;
pub mod report;
pub mod search;
pub mod sequence;
pub mod spectrum;
pub mod structure;

pub use group::{AutSet, Automorphism, Element, Group};
pub use report::{SearchReport, SearchStats, Verdict, CODE_VERSION, SCHEMA_VERSION};
pub use search::SearchConfig;
pub use sequence::{CanonicalKey, Sequence};
pub use spectrum::{LengthSpectrum, SubsumTable, SumMode};
pub use structure::{FormId, FormMatch, FormParams, FormSet, FormSpec, SchmidSpec};

/// Resource bounds for the dense engines.
///
/// The subsum table packs one group element per bit of a `u64`, so
/// `max_group_order` can never usefully exceed 64.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_group_order: usize,
    pub max_sequence_len: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: 64,
            max_sequence_len: 512,
        }
    }
}

impl Limits {
    pub(crate) fn effective_group_bound(&self) -> usize {
        self.max_group_order.min(64)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid invariant factors ({n1}, {n2}): need n1 >= 1, n2 >= 1 and n1 | n2")]
    InvalidGroup { n1: u32, n2: u32 },
    #[error("element ({a}, {b}) out of range for {group}")]
    ElementOutOfRange { a: u32, b: u32, group: Group },
    #[error("group order {order} exceeds the supported bound {max}")]
    GroupTooLarge { order: usize, max: usize },
    #[error("sequence length {len} exceeds the bound {max}")]
    SequenceTooLong { len: usize, max: usize },
    #[error("groups differ: {left} vs {right}")]
    GroupMismatch { left: Group, right: Group },
    #[error("not a subsequence: multiplicity of {element} exceeds the host sequence")]
    NotSubsequence { element: Element },
    #[error("expected a nonempty zero-sum subsequence of the host sequence")]
    NotZeroSumSubsequence,
    #[error("length class {k} out of range [1, {len}]")]
    LengthClassOutOfRange { k: usize, len: usize },
    #[error("invalid sequence JSON: {0}")]
    SequenceJson(String),
    #[error("invalid form spec: {0}")]
    InvalidFormSpec(String),
    #[error("the classification requires G = C_n (+) C_nm with n, m >= 2; got {group}")]
    DegenerateGroup { group: Group },
    #[error("search infeasible: estimated {estimate:.3e} nodes exceeds budget {budget:.3e}")]
    Infeasible { estimate: f64, budget: f64 },
    #[error("node budget {budget} exhausted during search")]
    BudgetExhausted { budget: u64 },
    #[error("search exceeded the internal depth cap {cap}")]
    DepthCapReached { cap: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
