use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn vclab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vclab"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .arg("--quiet")
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let out = vclab(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    report(dir)
}

#[test]
fn sauer_value() {
    let tmp = TempDir::new().unwrap();
    let r = ok(tmp.path(), &["sauer", "--d", "2", "--m", "5"]);
    assert_eq!(r["result"]["value"], 16);
    assert_eq!(r["manifest"]["subcommand"], "sauer");
    assert_eq!(r["manifest"]["seed"], 0);
}

#[test]
fn nfl_constant_learner() {
    let tmp = TempDir::new().unwrap();
    let r = ok(tmp.path(), &["nfl", "--m", "1", "--learner", "builtin:const0", "--space", "full"]);
    assert_eq!(r["result"]["max_error"], "1");
    assert_eq!(r["result"]["pass"], true);
}

#[test]
fn nfl_with_table_learner() {
    let tmp = TempDir::new().unwrap();
    let table = json!({"default": 3, "entries": [{"sample": [["x0", 1]], "hypothesis": 0}]});
    fs::write(tmp.path().join("table.json"), table.to_string()).unwrap();
    let r = ok(tmp.path(), &["nfl", "--m", "1", "--learner", "file:table.json"]);
    assert_eq!(r["result"]["pass"], true);
    assert_eq!(r["manifest"]["inputs"][0]["path"], "table.json");
    assert_eq!(r["manifest"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn bounds_and_sweep() {
    let tmp = TempDir::new().unwrap();
    let r = ok(tmp.path(), &["bounds", "--d", "1", "--eps", "0.5", "--delta", "0.5", "--csv"]);
    assert_eq!(r["result"]["m0_ucp"], 3273);
    let csv = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("eps,delta,"));
    assert_eq!(lines.len(), 1 + 36);
    assert!(!csv.contains("NaN") && !csv.contains("inf"));
}

#[test]
fn simulations_are_deterministic_across_thread_counts() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("d.json"), r#"{"support": [[0, 0], [1, 0], [2, 1], [3, 1]]}"#).unwrap();
    let args = ["ucp-sim", "--space", "thresholds", "--dist", "d.json", "--m", "4,8", "--eps", "1/8", "--trials", "3000"];
    let mut one: Vec<&str> = args.to_vec();
    one.extend(["--threads", "1"]);
    let a = ok(tmp.path(), &one)["result"].clone();
    let mut four: Vec<&str> = args.to_vec();
    four.extend(["--threads", "4"]);
    let b = ok(tmp.path(), &four)["result"].clone();
    assert_eq!(a, b);
    let csv = fs::read_to_string(tmp.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    let mut seeded: Vec<&str> = args.to_vec();
    seeded.extend(["--seed", "5"]);
    let c = ok(tmp.path(), &seeded)["result"].clone();
    assert_eq!(c["reports"][0]["seed"], 5);
}

#[test]
fn pac_exact_mode() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("d.json"), r#"{"support": [[0, 0], [1, 1]]}"#).unwrap();
    let r = ok(
        tmp.path(),
        &["pac-sim", "--space", "thresholds", "--dist", "d.json", "--m", "2", "--eps", "0", "--exact"],
    );
    let rep = &r["result"]["reports"][0];
    assert_eq!(rep["states"], 4);
    assert_eq!(r["result"]["learner"], "sem");
}

#[test]
fn vcdim_and_growth() {
    let tmp = TempDir::new().unwrap();
    let r = ok(tmp.path(), &["vcdim", "--space", "intervals", "--pool", "[1, 2, 3, 4]"]);
    assert_eq!(r["result"]["value"], 2);
    assert_eq!(r["result"]["status"], "exact");
    let r = ok(tmp.path(), &["growth", "--space", "thresholds", "--pool", "[1, 2, 3]", "--csv"]);
    let values: Vec<u64> = r["result"]["values"].as_array().unwrap().iter().map(|v| v["value"].as_u64().unwrap()).collect();
    assert_eq!(values, [2, 3, 4]);
}

#[test]
fn formula_subcommands() {
    let tmp = TempDir::new().unwrap();
    let r = ok(tmp.path(), &["formula", "space", "x != p", "--objects", "x", "--params", "p", "--instances", "1;2;3"]);
    assert_eq!(r["result"]["dichotomies"], json!(["011", "101", "110", "111"]));
    assert_eq!(r["result"]["exact"], true);
    assert_eq!(r["manifest"]["subcommand"], "formula space");

    let r = ok(tmp.path(), &["formula", "parse", "x ≥ p", "--objects", "x", "--params", "p"]);
    assert_eq!(r["result"]["formula"], "x >= p");
    assert_eq!(r["result"]["closed_form"]["shape"], "threshold");

    let r = ok(tmp.path(), &["formula", "eval", "x * x <= p", "--objects", "x", "--params", "p", "--x", "-2", "--w", "4"]);
    assert_eq!(r["result"]["value"], true);

    let r = ok(
        tmp.path(),
        &["formula", "shatter", "a <= x and x <= b", "--objects", "x", "--params", "a,b", "--instances", "1;2", "--budget", "500"],
    );
    assert_eq!(r["result"]["status"], "shattered");

    fs::write(tmp.path().join("phi.txt"), "x != p\n").unwrap();
    let r = ok(tmp.path(), &["formula", "shatter", "@phi.txt", "--objects", "x", "--params", "p", "--instances", "1;2", "--budget", "300"]);
    assert_eq!(r["result"]["status"], "not-found");
    assert_eq!(r["result"]["missing"], json!(["00"]));
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let out = vclab(tmp.path(), &["nfl", "--m", "4", "--learner", "builtin:const0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = vclab(tmp.path(), &["sauer", "--d", "2", "--m", "5", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = vclab(tmp.path(), &["ucp-sim", "--space", "thresholds", "--dist", "missing.json", "--m", "3", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    let out = vclab(tmp.path(), &["formula", "parse", "forall x (x = x)", "--objects", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("quantifier"));
}
