//! End-to-end tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn zerosum(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerosum"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn spectrum_prints_sorted_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &["spectrum", "--group", "2,4", "--seq", "[[1,0,1],[0,1,7]]"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "[4]");
}

#[test]
fn classify_prints_form3_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &["classify", "--group", "2,4", "--seq", "[[1,0,1],[0,1,7]]"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains(r#"{"form":3,"g1":[1,0],"g2":[0,1],"params":{}}"#),
        "missing form-3 witness in {text}"
    );
}

#[test]
fn verify_theorem_feasibility_abort_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &["verify", "theorem", "--group", "2,64", "--no-cache"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("\"verdict\":\"aborted\""));
}

#[test]
fn verify_theorem_verified_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &["verify", "theorem", "--group", "2,4", "--no-cache"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"verdict\":\"verified\""));
}

#[test]
fn verify_subcommands_run_threaded() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &[
            "verify", "theorem", "--group", "2,6", "--threads", "4", "--no-cache",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));

    for target in ["schmid", "sigma", "lemma31"] {
        let out = zerosum(
            &["verify", target, "--group", "2,4", "--no-cache"],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "verify {target} failed");
        assert!(stdout(&out).contains("\"verdict\":\"verified\""));
    }
}

#[test]
fn report_json_reserializes_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(&["davenport", "--group", "3,3", "--no-cache"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    let line = line.trim();
    let parsed: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), line);
}

#[test]
fn cache_round_trip_skips_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["davenport", "--group", "2,4", "--cache", "reports.jsonl"];
    let first = zerosum(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    let second = zerosum(&args, dir.path());
    assert_eq!(second.status.code(), Some(0));
    // the cached line is replayed verbatim
    assert_eq!(stdout(&first), stdout(&second));

    let cache_file = dir.path().join("reports.jsonl");
    let cached = std::fs::read_to_string(&cache_file).unwrap();
    assert_eq!(cached.lines().count(), 1, "second run must not recompute");

    let dump = zerosum(&["report", "--cache", "reports.jsonl"], dir.path());
    assert_eq!(dump.status.code(), Some(0));
    assert_eq!(stdout(&dump).trim(), cached.trim());
}

#[test]
fn refuted_reports_exit_1() {
    // No real check refutes on these groups, so replay a cached refuted
    // report to exercise the verdict-to-exit-status mapping end to end.
    let dir = tempfile::tempdir().unwrap();
    let fresh = zerosum(&["davenport", "--group", "2,4", "--no-cache"], dir.path());
    let mut report: serde_json::Value = serde_json::from_str(stdout(&fresh).trim()).unwrap();
    report["verdict"] = "refuted".into();
    report["counterexamples"] = serde_json::Value::Array(vec![report["witness"].clone()]);
    std::fs::write(
        dir.path().join("reports.jsonl"),
        format!("{}\n", serde_json::to_string(&report).unwrap()),
    )
    .unwrap();
    let replay = zerosum(
        &["davenport", "--group", "2,4", "--cache", "reports.jsonl"],
        dir.path(),
    );
    assert_eq!(replay.status.code(), Some(1));
    assert!(stdout(&replay).contains("\"verdict\":\"refuted\""));
}

#[test]
fn table_format_renders_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &[
            "davenport",
            "--group",
            "2,4",
            "--no-cache",
            "--format",
            "table",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict:  verified"));
    assert!(text.contains("claimed:  5"));
}

#[test]
fn sequence_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.json");
    std::fs::write(&path, r#"{"group":[2,4],"entries":[[1,0,1],[0,1,7]]}"#).unwrap();
    let out = zerosum(
        &["spectrum", "--group", "2,4", "--file", "seq.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "[4]");

    // group mismatch between flag and file is a usage error
    let out = zerosum(
        &["spectrum", "--group", "3,3", "--file", "seq.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_sequence_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &["spectrum", "--group", "2,4", "--seq", "[[0,1,0]]"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    let out = zerosum(&["spectrum", "--group", "4,6", "--seq", "[]"], dir.path());
    assert_eq!(out.status.code(), Some(2), "4 does not divide 6");
}

#[test]
fn l1_and_disc_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(&["disc", "--group", "2,4", "--no-cache"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"computed\":9"));

    let out = zerosum(&["l1", "--group", "2,4", "--no-cache"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"computed\":[4]"));
}

#[test]
fn scan_sufficiency_tallies_every_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerosum(
        &["scan-sufficiency", "--group", "2,4", "--no-cache"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    let tally = v["computed"].as_object().unwrap();
    assert_eq!(
        tally.keys().cloned().collect::<Vec<_>>(),
        vec!["1", "2", "3", "4", "5"]
    );
}
