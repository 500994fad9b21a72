//! End-to-end tests of the `nbl` binary: output shapes, caching,
//! determinism, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn nbl(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbl"))
        .env("NBL_CACHE", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classes_command_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(dir.path(), &["classes", "S3"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["classes"].as_array().unwrap().len(), 3);
    assert_eq!(doc["order"], 6);
}

#[test]
fn components_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(
        dir.path(),
        &[
            "components", "S3", "--r", "4", "--classes", "trans", "--base", "p1",
            "--equiv", "marked", "--cover", "galois",
        ],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["component_count"], 1);
    assert_eq!(doc["components"][0]["orbit_size"], 24);
}

#[test]
fn cache_soundness_and_bypass() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["components", "S3", "--r", "4", "--classes", "trans", "--cover", "galois"];
    let first = nbl(dir.path(), &args);
    assert!(first.status.success());
    // Cache files exist under <root>/<hh>/<digest>.json.
    let shards: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert!(!shards.is_empty(), "cache populated");
    let second = nbl(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout, "cached bytes equal recomputation");
    let mut bypass_args = args.to_vec();
    bypass_args.push("--no-cache");
    let third = nbl(dir.path(), &bypass_args);
    assert_eq!(first.stdout, third.stdout, "bypass recomputes the same bytes");
}

#[test]
fn determinism_across_thread_counts() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    let base = [
        "components", "A4", "--r", "4", "--base", "p1", "--equiv", "unmarked",
        "--cover", "galois", "--no-cache",
    ];
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = base.to_vec();
    four.extend(["--threads", "4"]);
    let a = nbl(dir1.path(), &one);
    let b = nbl(dir2.path(), &four);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout, "outputs must not depend on --threads");

    let series = [
        "series", "D5", "--r", "4..8", "--classes", "(2 5)(3 4)", "--equiv", "unmarked",
        "--cover", "galois", "--no-cache",
    ];
    let mut s1 = series.to_vec();
    s1.extend(["--threads", "1"]);
    let mut s3 = series.to_vec();
    s3.extend(["--threads", "3"]);
    let a = nbl(dir1.path(), &s1);
    let b = nbl(dir2.path(), &s3);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    // Large marked orbit: frontiers get wide enough for the parallel
    // expansion path, which must merge identically.
    let big = [
        "components", "S3", "--r", "12", "--classes", "trans", "--cover", "galois",
        "--no-cache",
    ];
    let mut b1 = big.to_vec();
    b1.extend(["--threads", "1"]);
    let mut b4 = big.to_vec();
    b4.extend(["--threads", "4"]);
    let a = nbl(dir1.path(), &b1);
    let b = nbl(dir2.path(), &b4);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn series_csv_format_and_period() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(
        dir.path(),
        &[
            "series", "S3", "--r", "3..10", "--classes", "trans", "--cover", "galois",
        ],
    );
    assert!(out.status.success());
    let csv = stdout_of(&out);
    assert!(csv.starts_with("r,count\n"));
    assert!(csv.contains("3,0\n"));
    assert!(csv.contains("4,1\n"));
    assert!(csv.contains("10,1\n"));
    assert!(csv.contains("# period 2 from r = 3 (observed within range, not proven)"));
}

#[test]
fn nielsen_enumeration_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(dir.path(), &["nielsen", "S3", "--r", "2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["count"], 5);
    assert_eq!(doc["truncated"], false);
    assert_eq!(doc["tuples"][0], serde_json::json!(["(2 3)", "(2 3)"]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // 1: input error.
    let bad = nbl(dir.path(), &["classes", "X9"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));
    // 2: budget exceeded, with flagged partial output.
    let tiny = nbl(
        dir.path(),
        &["nielsen", "A4", "--r", "5", "--max-tuples", "50", "--no-cache"],
    );
    assert_eq!(tiny.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&tiny)).unwrap();
    assert_eq!(doc["truncated"], true);
    // 0: success.
    let ok = nbl(dir.path(), &["classes", "S3"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn budget_exceeded_components_not_cached() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["components", "S4", "--r", "4", "--max-orbit", "10", "--no-cache"];
    let out = nbl(dir.path(), &args);
    assert_eq!(out.status.code(), Some(2));
    let cached = ["components", "S4", "--r", "4", "--max-orbit", "10"];
    let out = nbl(dir.path(), &cached);
    assert_eq!(out.status.code(), Some(2), "partial results are never cached");
}

#[test]
fn concat_and_twist_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(
        dir.path(),
        &[
            "concat", "S3", "--base", "a1",
            "--x", r#"["(1 2)"]"#,
            "--y", r#"["(1 3)"]"#,
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["product"]["r"], 2);
    // One braid move identifies ((1 2),(1 3)) with ((2 3),(1 2)).
    assert_eq!(doc["product"]["canonical_rep"][0], "(2 3)");

    let out = nbl(
        dir.path(),
        &[
            "twist", "S3",
            "--x", r#"["(1 2 3)", "(1 3 2)"]"#,
            "--y", r#"["(1 2)", "(1 2)"]"#,
        ],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["hk_equals_join"], true);
    assert_eq!(doc["singleton"], true);
}

#[test]
fn component_id_references_resolve() {
    let dir = tempfile::tempdir().unwrap();
    let listing = dir.path().join("comps.json");
    let out = nbl(
        dir.path(),
        &[
            "components", "S3", "--r", "2", "--out", listing.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&listing).unwrap()).unwrap();
    let id = doc["components"][0]["id"].as_str().unwrap();
    let out = nbl(
        dir.path(),
        &[
            "concat", "S3",
            "--x", &format!("id:{id}"),
            "--y", &format!("id:{id}"),
            "--from", listing.to_str().unwrap(),
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["product"]["r"], 4);
}

#[test]
fn splitting_and_hf_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(
        dir.path(),
        &["splitting", "S3", "--subgroup", "(1 2 3)", "--classes", "(1 2 3)"],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["omega"], 1);

    // Sweep form: witness for the splitting 3-cycle class.
    let out = nbl(dir.path(), &["splitting", "S3", "--classes", "(1 2 3)"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["holds"], false);
    assert_eq!(doc["witness"]["subgroup_order"], 3);

    let out = nbl(
        dir.path(),
        &[
            "hf", "S3", "--subgroup", "(1 2 3)", "--classes", "(1 2 3)", "--r", "6",
        ],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["count"], 3);

    let strict = nbl(
        dir.path(),
        &[
            "hf", "S3", "--subgroup", "(1 2 3)", "--classes", "(1 2 3)", "--r", "6",
            "--hf-strict-per-class",
        ],
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&strict)).unwrap();
    assert_eq!(doc["count"], 1);
}

#[test]
fn components_with_lifting_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(
        dir.path(),
        &[
            "components", "A4", "--r", "4",
            "--classes", "(2 3 4)", "--classes", "(2 4 3)",
            "--cover", "galois", "--extension", "builtin:a4",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["component_count"], 2);
    let mut lifts: Vec<String> = doc["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["lifting"]["element"].as_str().unwrap().to_string())
        .collect();
    lifts.sort();
    assert_eq!(lifts, vec!["()", "(1 2)(3 6)(4 8)(5 7)"]);
}

#[test]
fn lift_rational_cpfv_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(
        dir.path(),
        &[
            "lift", "A4", "--extension", "builtin:a4",
            "--tuple", r#"["(2 3 4)", "(2 3 4)", "(1 2 3)", "(1 4 2)"]"#,
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["central"], true);
    assert_eq!(doc["element"], "(1 2)(3 6)(4 8)(5 7)");

    let out = nbl(dir.path(), &["rational", "S3", "--ici", r#"{"(1 2 3)": 2}"#]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["rational"], true);

    let out = nbl(
        dir.path(),
        &["cpfv", "A4", "--extension", "builtin:a4", "--r", "4..5"],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["rows"][0]["connected_collisions"], 0);

    // Same request from the cache is byte-identical.
    let again = nbl(
        dir.path(),
        &["cpfv", "A4", "--extension", "builtin:a4", "--r", "4..5"],
    );
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn extension_rejections_cite_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q8.json");
    std::fs::write(
        &path,
        serde_json::json!({
            "cover": "perm(8; (1 3 2 4)(5 8 6 7), (1 5 2 6)(3 7 4 8))",
            "projection": [
                ["(1 3 2 4)(5 8 6 7)", "(1 2)(3 4)"],
                ["(1 5 2 6)(3 7 4 8)", "(1 3)(2 4)"]
            ],
            "classes": ["(1 2)(3 4)", "(1 3)(2 4)"]
        })
        .to_string(),
    )
    .unwrap();
    let out = nbl(
        dir.path(),
        &[
            "lift", "perm(4; (1 2)(3 4), (1 3)(2 4))",
            "--extension", path.to_str().unwrap(),
            "--tuple", r#"["(1 2)(3 4)", "(1 2)(3 4)"]"#,
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not-c-admissible"), "stderr: {err}");
}

#[test]
fn verify_subcommand_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(
        dir.path(),
        &["verify", "braid-relations", "--group", "S3", "--r", "4"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("PASS"));

    let out = nbl(dir.path(), &["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn subgroups_command_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(dir.path(), &["subgroups", "S3"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["subgroup_classes"].as_array().unwrap().len(), 4);
    assert_eq!(doc["total_subgroups"], 6);
    let orders: Vec<u64> = doc["subgroup_classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, vec![1, 2, 3, 6]);
}

#[test]
fn verify_all_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbl(dir.path(), &["verify", "all"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stdout:\n{}\nstderr:\n{}",
        stdout_of(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    for suite in [
        "braid-relations", "orbit-oracle", "clebsch", "prefix-normalization",
        "stabilization", "inner-conjugation", "monoid", "twist-singleton",
        "splitting-growth", "lifting", "rationality",
    ] {
        assert!(text.contains(&format!("suite {suite}")), "missing {suite}");
    }
    assert!(text.trim_end().ends_with("PASS"));
}
