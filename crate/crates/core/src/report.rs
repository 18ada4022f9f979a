//! Auditable outcomes of the search-layer checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::group::Group;

/// Version stamp of the JSON-lines report schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Code version recorded in reports; cache lookups require an exact match so
/// stale results never shadow a changed engine.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Check-name identifiers shared by the search layer and the CLI cache.
pub mod checks {
    pub const DAVENPORT: &str = "davenport";
    pub const DISC: &str = "disc";
    pub const L1: &str = "l1";
    pub const VERIFY_THEOREM: &str = "verify_theorem";
    pub const VERIFY_SCHMID: &str = "verify_schmid";
    pub const VERIFY_SIGMA: &str = "verify_sigma";
    pub const VERIFY_LEMMA31: &str = "verify_lemma31";
    pub const SUFFICIENCY_SCAN: &str = "sufficiency_scan";
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Aborted,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub orbits_visited: u64,
    /// Sequences matched per form, keyed by the form number as a string.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_form_matches: BTreeMap<String, u64>,
    pub sequences_tested: u64,
    pub wall_ms: u64,
}

/// One verification outcome. Refuted reports carry counterexamples that
/// re-fail the check when re-tested in isolation.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed: Option<Value>,
    pub code_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub computed: Option<Value>,
    pub counterexamples: Vec<Value>,
    pub group: [u32; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub schema_version: u32,
    pub stats: SearchStats,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl SearchReport {
    pub fn new(check: &str, group: &Group, verdict: Verdict) -> SearchReport {
        SearchReport {
            check: check.to_string(),
            claimed: None,
            code_version: CODE_VERSION.to_string(),
            computed: None,
            counterexamples: Vec::new(),
            group: [group.n1(), group.n2()],
            message: None,
            schema_version: SCHEMA_VERSION,
            stats: SearchStats::default(),
            verdict,
            witness: None,
        }
    }

    pub fn aborted(check: &str, group: &Group, message: impl Into<String>) -> SearchReport {
        let mut r = SearchReport::new(check, group, Verdict::Aborted);
        r.message = Some(message.into());
        r
    }

    /// Canonical JSON value; objects come out with sorted keys, so the
    /// emission is byte-stable and parse/re-serialize round-trips exactly.
    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("report serializes")
    }

    /// JSON with the stats object removed, for determinism comparisons
    /// (wall time is the one legitimately run-dependent field).
    pub fn to_json_line_without_stats(&self) -> String {
        let mut v = self.to_json_value();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("stats");
        }
        serde_json::to_string(&v).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips_byte_identically() {
        let g = Group::new(2, 4).unwrap();
        let mut r = SearchReport::new("davenport", &g, Verdict::Verified);
        r.claimed = Some(5.into());
        r.computed = Some(5.into());
        r.stats.nodes_expanded = 17;
        let line = r.to_json_line();
        let parsed: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), line);
        let back: SearchReport = serde_json::from_value(parsed).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn stats_exclusion_drops_wall_time() {
        let g = Group::new(2, 4).unwrap();
        let mut a = SearchReport::new("verify_theorem", &g, Verdict::Verified);
        let mut b = a.clone();
        a.stats.wall_ms = 12;
        b.stats.wall_ms = 99;
        assert_ne!(a.to_json_line(), b.to_json_line());
        assert_eq!(
            a.to_json_line_without_stats(),
            b.to_json_line_without_stats()
        );
    }
}
