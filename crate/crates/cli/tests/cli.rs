use assert_cmd::Command;
use predicates::prelude::*;
use tempfile::tempdir;

fn bin() -> Command {
    Command::cargo_bin("drinfeld").unwrap()
}

#[test]
fn mzv_eval_zeta_two() {
    bin()
        .args(["mzv", "eval", "--index", "2", "--digits", "30"])
        .assert()
        .success()
        .stdout("1.644934066848226436472415166646\n");
}

#[test]
fn mzv_eval_rejects_divergent_index() {
    bin()
        .args(["mzv", "eval", "--index", "2,1", "--digits", "30"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("not admissible"));
}

#[test]
fn mzv_table_writes_31_records() {
    let dir = tempdir().unwrap();
    let cache = dir.path().join("c.txt");
    bin()
        .args(["mzv", "table", "--max-weight", "6", "--cache"])
        .arg(&cache)
        .assert()
        .success()
        .stdout(predicate::str::contains("holds 31 records"));
    let text = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count(), 31);
    // a second run reuses every record
    bin().args(["mzv", "table", "--max-weight", "6", "--cache"]).arg(&cache).assert().success();
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), text);
}

#[test]
fn assoc_solve_then_check() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("phi.txt");
    bin().args(["assoc", "solve", "--max-weight", "4", "--seed", "1", "--out"]).arg(&out).assert().success();
    let dims = std::fs::read_to_string(dir.path().join("phi.txt.dims.json")).unwrap();
    let dims: serde_json::Value = serde_json::from_str(&dims).unwrap();
    let d: Vec<u64> = dims["degrees"].as_array().unwrap().iter().map(|d| d["dimension"].as_u64().unwrap()).collect();
    assert_eq!(d, vec![0, 1, 1, 0]);
    let assert = bin().args(["assoc", "check"]).arg(&out).assert().success();
    let report: serde_json::Value = serde_json::from_slice(&assert.get_output().stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["degenerate"], false);
    assert_eq!(report["pentagon"], 0.0);
}

#[test]
fn assoc_check_trivial_and_corrupt() {
    let dir = tempdir().unwrap();
    let one = dir.path().join("one.txt");
    std::fs::write(&one, "# ncseries order=4 scalar=rational\n- 1\n").unwrap();
    let assert = bin().args(["assoc", "check"]).arg(&one).assert().success();
    let report: serde_json::Value = serde_json::from_slice(&assert.get_output().stdout).unwrap();
    assert_eq!(report["degenerate"], true);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "# ncseries order=4 scalar=rational\n01 x\n").unwrap();
    bin().args(["assoc", "check"]).arg(&bad).assert().code(2);
    bin().args(["assoc", "check"]).arg(dir.path().join("missing.txt")).assert().code(2);
}

#[test]
fn relation_b_on_solver_output() {
    let dir = tempdir().unwrap();
    let report = dir.path().join("b.json");
    let args = ["relations", "verify", "--which", "B", "--phi", "generic", "--max-weight", "6", "--seed", "7", "--N", "3,4,5", "--report"];
    bin().args(args).arg(&report).assert().success();
    let first = std::fs::read_to_string(&report).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["pass"], true);
    let res = doc["reports"][0]["residuals"].as_array().unwrap();
    assert_eq!(res.len(), 3 * 7);
    assert!(res.iter().all(|r| r["value"] == "0/1"));

    // identical config gives an identical report apart from timing
    bin().args(args).arg(&report).assert().success();
    let strip = |s: &str| s.lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&first), strip(&std::fs::read_to_string(&report).unwrap()));
}

#[test]
fn relation_b_rejects_n_one() {
    bin()
        .args(["relations", "verify", "--which", "B", "--N", "1"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("N != 1"));
}

#[test]
fn relation_d_on_kz() {
    let dir = tempdir().unwrap();
    let cache = dir.path().join("c.txt");
    let assert = bin()
        .args(["relations", "verify", "--which", "D", "--phi", "kz", "--max-weight", "8", "--digits", "50", "--cache"])
        .arg(&cache)
        .assert()
        .success();
    let doc: serde_json::Value = serde_json::from_slice(&assert.get_output().stdout).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["cache_digest"].as_str().unwrap().len(), 64);
    assert_eq!(doc["config"]["digits"], 50);
}

#[test]
fn failing_relation_exits_one() {
    // the literal reading of C already misses at h^2
    bin()
        .args(["relations", "verify", "--which", "C", "--max-weight", "2", "--N", "3", "--convention", "literal"])
        .assert()
        .code(1);
}

#[test]
fn usage_errors_exit_two() {
    bin().args(["relations", "verify", "--which", "E"]).assert().code(2);
    bin().args(["relations", "verify", "--phi", "kz", "--digits", "20"]).assert().code(2);
    bin().args(["mzv", "frobnicate"]).assert().code(2);
}
