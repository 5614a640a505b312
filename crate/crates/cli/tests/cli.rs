use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn onticlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onticlab"))
        .args(args)
        .env_remove("ONTICLAB_POINTS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn pncheck_rational_is_contextual() {
    let out = onticlab(&["pncheck", "--q", "1/2", "--rational"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tool"], "onticlab");
    assert_eq!(v["schema"], "v1/pncheck");
    assert_eq!(v["config"]["q"], "1/2");
    assert_eq!(v["result"]["verdict"], "Contextual");
    assert_eq!(v["result"]["infeasible_branches"], 16);
}

#[test]
fn pncheck_float_and_explain() {
    let out = onticlab(&["pncheck", "--q", "0.9", "--eps", "1e-9"]);
    assert_eq!(json(&out)["result"]["verdict"], "Contextual");
    assert_eq!(json(&out)["result"]["instance"]["arithmetic"]["mode"], "float");
    let out = onticlab(&["pncheck", "--q", "1/2", "--rational", "--explain"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("case (a)") && text.contains("case (h)"));
}

#[test]
fn usage_and_domain_exit_codes() {
    assert_eq!(onticlab(&["pncheck", "--q", "1/2", "--bogus"]).status.code(), Some(1));
    assert_eq!(onticlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(onticlab(&["pncheck", "--q", "1"]).status.code(), Some(2));
    assert_eq!(onticlab(&["pncheck", "--q", "1/2", "--rational", "--eps", "1e-6"]).status.code(), Some(1));
    assert_eq!(onticlab(&["sweep", "pncheck", "--q", "1:0:1/10"]).status.code(), Some(1));
    assert_eq!(onticlab(&["sweep", "pncheck", "--q", "0:1"]).status.code(), Some(1));
    assert_eq!(onticlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_pncheck_ten_contextual_rows() {
    let out = onticlab(&["sweep", "pncheck", "--q", "0:9/10:1/10", "--rational"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r[4] == "Contextual" && r[5] == "16"));
    assert_eq!(rows[9][0], "9/10");
}

#[test]
fn single_point_sweep_matches_single_run() {
    let rows = csv_rows(&onticlab(&["sweep", "pncheck", "--q", "1/4", "--rational"]));
    assert_eq!(rows.len(), 1);
    let single = json(&onticlab(&["pncheck", "--q", "1/4", "--rational"]));
    assert_eq!(rows[0][4], single["result"]["verdict"].as_str().unwrap());
    assert_eq!(rows[0][5], single["result"]["infeasible_branches"].to_string());
}

#[test]
fn sweep_model_overlap_tracks_epsilon() {
    let out = onticlab(&["sweep", "model-overlap", "--epsilon", "0:1:0.25", "--points", "50000"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    for (k, row) in rows.iter().enumerate() {
        let eps = k as f64 * 0.25;
        let f: f64 = row[4].parse().unwrap();
        assert!((f - (1.0 - eps)).abs() < 2e-2, "{row:?}");
    }
}

#[test]
fn model_reports() {
    let out = onticlab(&["model", "verify", "--model", "ks", "--points", "50000", "--trials", "10", "--seed", "4"]);
    let v = json(&out);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["result"]["passed"], true);

    let out = onticlab(&["model", "overlap", "--model", "deficit", "--epsilon", "0.1", "--points", "50000"]);
    let r = &json(&out)["result"];
    assert!((r["f"].as_f64().unwrap() - 0.9).abs() < 2e-2);
    assert!((r["omega_mass"].as_f64().unwrap() - 0.05).abs() < 5e-3);

    let out = onticlab(&["model", "overlap", "--pair", "0,0,1;0,0,-1", "--points", "5000"]);
    assert!(json(&out)["result"]["f"].is_null());
}

#[test]
fn points_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_onticlab"))
        .args(["model", "overlap", "--model", "ks"])
        .env("ONTICLAB_POINTS", "3000")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["points"], 3000);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["model", "verify", "--points", "20000", "--trials", "5", "--seed", "9"];
    assert_eq!(onticlab(&args).stdout, onticlab(&args).stdout);
    let args = ["pncheck", "--q", "3/4", "--rational"];
    assert_eq!(onticlab(&args).stdout, onticlab(&args).stdout);
}

#[test]
fn steer_reports_fixture_hashes() {
    let state = fixture("bell.json");
    let target = fixture("bell_diagonal_target.json");
    let out = onticlab(&["steer", "--state", state.to_str().unwrap(), "--target", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["passed"], true);
    let digest = Sha256::digest(std::fs::read(&state).unwrap());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(v["fixtures"][state.to_str().unwrap()], hex);
}

#[test]
fn steer_rejects_foreign_target() {
    let state = fixture("skewed_2x2.json");
    let target = fixture("bell_diagonal_target.json");
    let out = onticlab(&["steer", "--state", state.to_str().unwrap(), "--target", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(onticlab(&["steer", "--state", "/nonexistent.json", "--target", target.to_str().unwrap()])
        .status
        .code()
        == Some(2));
}

#[test]
fn witness_exit_codes() {
    let skewed = fixture("skewed_2x2.json");
    let skewed = skewed.to_str().unwrap();
    let out = onticlab(&["witness", "--state", skewed, "--model", "deficit", "--epsilon", "0.2", "--require-nonlocal"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verdict"], "Nonlocal");

    let out = onticlab(&["witness", "--state", skewed, "--model", "ks", "--require-nonlocal"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["result"]["verdict"], "Inconclusive");
    let out = onticlab(&["witness", "--state", skewed, "--model", "ks"]);
    assert_eq!(out.status.code(), Some(0));

    let product = fixture("product_2x2.json");
    assert_eq!(onticlab(&["witness", "--state", product.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn witness_rank_three() {
    let state = fixture("max_entangled_3x3.json");
    let v = json(&onticlab(&["witness", "--state", state.to_str().unwrap()]));
    assert_eq!(v["result"]["schmidt_rank"], 3);
    assert_eq!(v["result"]["evidence"]["kind"], "structural");
    assert_eq!(v["result"]["contexts"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["verdict"], "Nonlocal");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("decomp.json");
    let out = onticlab(&["decomp", "--q", "1/3", "--rational", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let decomps = v["result"]["decompositions"].as_array().unwrap();
    assert_eq!(decomps.len(), 6);
    assert_eq!(decomps[0]["members"][0]["weight"], "1/3");
}
