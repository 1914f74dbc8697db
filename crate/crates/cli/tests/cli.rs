use std::path::Path;
use std::process::{Command, Output};

fn bracelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bracelab"))
        .args(args)
        .env_remove("BRACELAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_writes_catalog_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b6.jsonl");
    let o = bracelab(&["enumerate", "--kind", "braces", "--order", "6", "--out", path(&out)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let meta: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(meta["kind"], "braces");
    assert_eq!(meta["order"], 6);
    assert_eq!(meta["count"], 6);
    assert_eq!(meta["method"], "holomorph");
    assert!(meta["wall_time_s"].is_number());
    assert_eq!(lines.count(), 6);
}

#[test]
fn direct_and_holomorph_catalogs_have_equal_counts() {
    for order in ["4", "6"] {
        let h = bracelab(&["enumerate", "--kind", "braces", "--order", order]);
        let d = bracelab(&["enumerate", "--kind", "braces", "--order", order, "--method", "direct"]);
        assert!(h.status.success() && d.status.success());
        let count = |o: &Output| String::from_utf8_lossy(&o.stdout).lines().count();
        assert_eq!(count(&h), count(&d));
    }
}

#[test]
fn solutions_and_groups_catalogs() {
    let s = bracelab(&["enumerate", "--kind", "solutions", "--order", "4"]);
    assert!(s.status.success());
    assert_eq!(String::from_utf8_lossy(&s.stdout).lines().count(), 1 + 23);
    let g = bracelab(&["enumerate", "--kind", "groups", "--order", "8"]);
    assert!(g.status.success());
    assert_eq!(String::from_utf8_lossy(&g.stdout).lines().count(), 1 + 5);
}

#[test]
fn classify_reports_one_row_per_brace() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("b8.jsonl");
    let csv = dir.path().join("b8.csv");
    assert!(
        bracelab(&["enumerate", "--kind", "braces", "--order", "8", "--out", path(&cat)])
            .status
            .success()
    );
    let o = bracelab(&["classify", "--in", path(&cat), "--report", path(&csv)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("47 braces, 45 annihilator nilpotent"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 48);
    assert!(text.starts_with("index,order,"));
}

#[test]
fn analyze_five_point_solution() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    std::fs::write(
        &file,
        r#"{"n":5,"sigma":[[0,1,2,3,4],[0,1,2,3,4],[0,1,2,3,4],[0,2,1,4,3],[1,0,2,4,3]]}"#,
    )
    .unwrap();
    let o = bracelab(&["solution", "analyze", "--in", path(&file)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["brace_order"], 6);
    assert_eq!(v["right_nilpotent"], true);
    assert_eq!(v["left_nilpotent"], false);
    assert!(v["level"].is_number());
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    // σ_0 is not a permutation.
    std::fs::write(&file, r#"{"n":2,"sigma":[[0,0],[0,1]]}"#).unwrap();
    assert_eq!(
        bracelab(&["solution", "analyze", "--in", path(&file)]).status.code(),
        Some(2)
    );
    assert_eq!(bracelab(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        bracelab(&["enumerate", "--kind", "groups", "--order", "3", "--method", "direct"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bracelab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_census_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("census.csv");
    let report = dir.path().join("report.json");
    let o = bracelab(&[
        "verify",
        "--suite",
        "census",
        "--max-order",
        "8",
        "--jobs",
        "2",
        "--csv",
        path(&csv),
        "--report",
        path(&report),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(
        "order,groups,braces,trivial,two_sided,abelian_type,nilpotent_type,left,right,strong,annihilator"
    ));
    assert!(text.lines().any(|l| l.starts_with("8,5,47,")));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["suite"], "census");
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["failures"] == 0));
}

#[test]
fn tampered_catalog_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // Two copies of the trivial brace of order 2 claimed as a catalog.
    let row = r#"{"n":2,"add":[[0,1],[1,0]],"mul":[[0,1],[1,0]]}"#;
    let text = format!(
        "{{\"kind\":\"braces\",\"order\":2,\"count\":2,\"wall_time_s\":0.0,\"method\":\"holomorph\"}}\n{row}\n{row}\n"
    );
    std::fs::write(dir.path().join("braces-2.jsonl"), text).unwrap();
    let o = bracelab(&[
        "verify",
        "--suite",
        "axioms",
        "--orders",
        "2",
        "--catalog-dir",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("catalog_pairwise_non_isomorphic"));
}

#[test]
fn verify_builds_missing_catalogs() {
    let dir = tempfile::tempdir().unwrap();
    let o = bracelab(&[
        "verify",
        "--suite",
        "axioms",
        "--max-order",
        "4",
        "--catalog-dir",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("braces-4.jsonl").exists());
}

#[test]
fn equivalence_reports_seed_and_samples() {
    let o = bracelab(&[
        "verify",
        "--suite",
        "equivalence",
        "--max-order",
        "4",
        "--samples",
        "10",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["scope"]["samples"], 10);
    assert_eq!(v["scope"]["sampled_size"], 5);
}
