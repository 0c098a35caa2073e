use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use spectre::{run_with_threads, Outcome};

fn run(args: &[&str]) -> Outcome {
    run_with_threads(std::iter::once("spectre").chain(args.iter().copied()), Some(2))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let validator = schema(name);
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn csv_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn binary(args: &[&str], threads: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spectre"));
    cmd.args(args).env_remove(spectre::THREADS_ENV);
    if let Some(t) = threads {
        cmd.env(spectre::THREADS_ENV, t);
    }
    cmd.output().unwrap()
}

const SMALL_SCHEDULE: &str = "1000,10000,100000";

#[test]
fn clifford_table_has_eight_verified_rows() {
    let doc = json(&["clifford-table"]);
    assert_valid("clifford-table", &doc);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let eps: Vec<i64> = rows.iter().map(|r| r["eps"].as_i64().unwrap()).collect();
    assert_eq!(eps, [1, -1, -1, -1, -1, 1, 1, 1]);
    assert!(rows.iter().all(|r| r["verified"] == true && r["matches_table"] == true));
    let csv = run(&["clifford-table", "--format", "csv"]);
    assert_eq!(csv.stdout.lines().count(), 9);
}

#[test]
fn hochschild_report_validates() {
    let doc = json(&["hochschild", "--seed", "3", "--trials", "5"]);
    assert_valid("hochschild", &doc);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["junk"]["delta_xi_is_minus_two_u_squared"], true);
}

#[test]
fn dixmier_builtin_and_csv_runs() {
    let doc = json(&["dixmier", "--sequence", "harmonic", "--schedule", SMALL_SCHEDULE]);
    assert_valid("dixmier", &doc);
    assert!((doc["value"].as_f64().unwrap() - 1.0).abs() < 0.01);

    let mut runs = String::from("value,multiplicity\n");
    for k in 1..=200_000u64 {
        runs.push_str(&format!("{},2\n", 1.0 / k as f64));
    }
    let file = csv_file(&runs);
    let doc = json(&["dixmier", "--runs", file.path().to_str().unwrap(), "--schedule", SMALL_SCHEDULE]);
    assert_valid("dixmier", &doc);
    assert!((doc["value"].as_f64().unwrap() - 2.0).abs() < 0.02);

    let bad = csv_file("value,multiplicity\n0.5,1\n0.9,1\n");
    assert_eq!(run(&["dixmier", "--runs", bad.path().to_str().unwrap(), "--schedule", SMALL_SCHEDULE]).code, 2);
    assert_eq!(run(&["dixmier", "--sequence", "harmonic", "--runs", "x.csv"]).code, 2);
    assert_eq!(run(&["dixmier", "--sequence", "harmonic", "--schedule", "10,5,20"]).code, 2);
}

#[test]
fn volume_circle_ratio_is_one() {
    let doc = json(&["volume", "--model", "circle", "--p", "1"]);
    assert_valid("volume", &doc);
    assert!((doc["ratio"].as_f64().unwrap() - 1.0).abs() < 0.02);
    assert!((doc["c_p_vol"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn volume_torus_and_failures() {
    let doc = json(&["volume", "--model", "torus", "--p", "2", "--schedule", SMALL_SCHEDULE]);
    assert_valid("volume", &doc);
    assert!((doc["c_p_vol"].as_f64().unwrap() - std::f64::consts::TAU).abs() < 1e-12);
    assert_eq!(run(&["volume", "--model", "circle", "--p", "2"]).code, 2);
    assert_eq!(run(&["volume", "--model", "torus", "--p", "1"]).code, 2);
    assert_eq!(run(&["volume", "--model", "torus", "--p", "5"]).code, 2);
    let coarse = run(&["volume", "--model", "circle", "--p", "1", "--schedule", "2,3,4"]);
    assert_eq!(coarse.code, 1, "{}", coarse.stdout);
    let doc: Value = serde_json::from_str(&coarse.stdout).unwrap();
    assert_valid("volume", &doc);
    assert_eq!(doc["passed"], false);
}

#[test]
fn distance_on_a_small_graph() {
    let graph = csv_file("u,v,length\na,b,1.5\nb,c,2\na,c,4\nc,d,0.25\n");
    let path = graph.path().to_str().unwrap();
    let doc = json(&["distance", "--graph", path, "--from", "a", "--to", "d"]);
    assert_valid("distance", &doc);
    assert_eq!(doc["distance"].as_f64().unwrap(), 3.75);
    assert!((doc["lp_distance"].as_f64().unwrap() - 3.75).abs() < 1e-9);
    let csv = run(&["distance", "--graph", path, "--from", "a", "--to", "d", "--format", "csv"]);
    assert!(csv.stdout.starts_with("from,to,distance,lp_distance,difference,passed\na,d,3.75,"));
    assert_eq!(run(&["distance", "--graph", path, "--from", "a", "--to", "z"]).code, 2);

    let split = csv_file("u,v,length\na,b,1\nc,d,1\n");
    let out = run(&["distance", "--graph", split.path().to_str().unwrap(), "--from", "a", "--to", "d"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("different components"));
    assert_eq!(run(&["distance", "--graph", "/nonexistent/graph.csv", "--from", "a", "--to", "b"]).code, 2);
}

#[test]
fn wres_reports_exact_coefficients() {
    let doc = json(&["wres", "--p", "4", "--parity", "even", "--torsion", "on"]);
    assert_valid("wres", &doc);
    assert_eq!(doc["coeff_R"], "-1/6·c(4)");
    assert_eq!(doc["coeff_t2"], "3·c(4)");
    let expected = -1.0 / (48.0 * std::f64::consts::PI.powi(2));
    assert!((doc["decimal"]["coeff_R"].as_f64().unwrap() - expected).abs() < 1e-15);
    for (p, parity, r, t2) in [("3", "odd", "-1/12", "3/2"), ("5", "odd", "-1/4", "9/2"), ("6", "even", "-1/3", "6")] {
        let doc = json(&["wres", "--p", p, "--parity", parity]);
        assert_valid("wres", &doc);
        assert_eq!(doc["exact"]["coeff_R"], r);
        assert_eq!(doc["exact"]["coeff_t2"], t2);
    }
    let off = json(&["wres", "--p", "4", "--parity", "even", "--torsion", "off"]);
    assert_valid("wres", &off);
    assert_eq!(off["exact"]["coeff_t2"], "0");
    let two = json(&["wres", "--p", "2", "--parity", "even"]);
    assert_eq!((two["exact"]["coeff_R"].as_str(), two["exact"]["coeff_t2"].as_str()), (Some("0"), Some("0")));
}

#[test]
fn schemas_reject_malformed_reports() {
    let mut doc = json(&["wres", "--p", "4", "--parity", "even"]);
    doc["coeff_R"] = Value::from(-0.5);
    assert!(!schema("wres").is_valid(&doc));
    let mut doc = json(&["clifford-table"]);
    doc["rows"].as_array_mut().unwrap().pop();
    assert!(!schema("clifford-table").is_valid(&doc));
    let mut doc = json(&["volume", "--model", "circle", "--p", "1", "--schedule", SMALL_SCHEDULE]);
    doc.as_object_mut().unwrap().remove("ratio");
    assert!(!schema("volume").is_valid(&doc));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["bogus"]).code, 2);
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["wres", "--p", "3", "--parity", "even"]).code, 2);
    assert_eq!(run(&["wres", "--p", "1", "--parity", "odd"]).code, 2);
    assert_eq!(run(&["hochschild", "--trials", "0"]).code, 2);
    assert_eq!(run(&["wres", "--p", "4", "--parity", "even", "--format", "xml"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        vec!["hochschild", "--seed", "11", "--trials", "8"],
        vec!["wres", "--p", "5", "--parity", "odd"],
        vec!["volume", "--model", "torus", "--p", "2", "--schedule", SMALL_SCHEDULE],
        vec!["clifford-table", "--format", "csv"],
    ] {
        let argv = || std::iter::once("spectre").chain(args.iter().copied());
        let one = run_with_threads(argv(), Some(1));
        let again = run_with_threads(argv(), Some(1));
        let many = run_with_threads(argv(), Some(4));
        assert_eq!(one, again, "{args:?}");
        assert_eq!(one, many, "{args:?}");
    }
    let a = run(&["hochschild", "--seed", "1", "--trials", "4"]);
    let b = run(&["hochschild", "--seed", "2", "--trials", "4"]);
    assert_eq!(a.code, 0);
    assert_eq!(b.code, 0);
}

#[test]
fn binary_exit_codes_and_thread_cap() {
    let out = binary(&["bogus"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let capped = binary(&["wres", "--p", "4", "--parity", "even"], Some("1"));
    assert_eq!(capped.status.code(), Some(0));
    let free = binary(&["wres", "--p", "4", "--parity", "even"], None);
    assert_eq!(capped.stdout, free.stdout);

    assert_eq!(binary(&["clifford-table"], Some("zero")).status.code(), Some(2));
    assert_eq!(binary(&["clifford-table"], Some("0")).status.code(), Some(2));
    assert_eq!(
        binary(&["volume", "--model", "circle", "--p", "1", "--schedule", "2,3,4"], None).status.code(),
        Some(1)
    );
}
