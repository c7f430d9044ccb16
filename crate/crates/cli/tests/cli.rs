use std::path::Path;
use std::process::{Command, Output};

use helly_core::constructions::gen_discrete_tight;
use helly_core::engine::{check_helly, EngineConfig, Predicate};
use helly_core::Family;
use serde_json::{Map, Value};

fn helly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helly")).args(args).env_remove("HELLY_JOBS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut e: Vec<_> = m.into_iter().collect();
            e.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(e.into_iter().map(|(k, v)| (k, sorted(v))).collect::<Map<_, _>>())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        o => o,
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate_discrete(dir: &Path, d: usize) -> std::path::PathBuf {
    let file = dir.join(format!("discrete{d}.json"));
    let out = helly(&["generate", "--construction", "discrete-tight", "--params", &format!("d={d}"), "-o", path_str(&file)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["verified"], Value::Bool(true));
    file
}

#[test]
fn discrete_tight_plane() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate_discrete(dir.path(), 2);
    let family = Family::from_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(family.len(), 8);

    let out = helly(&["check", "--family", path_str(&file), "-m", "7", "--predicate", "colinear", "-k", "3"]);
    assert_eq!(out.status.code(), Some(1), "a failed transfer is a verification failure");
    let report = json(&out);
    assert_eq!(report["alpha"], "1");
    assert_eq!(report["hypothesis_holds"], true);
    assert_eq!(report["conclusion"]["holds"], false);
}

#[test]
fn round_trip_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate_discrete(dir.path(), 2);
    let text = std::fs::read_to_string(&file).unwrap();

    let reread = Family::from_json(&text).unwrap();
    let (generated, _) = gen_discrete_tight(2, &EngineConfig::default()).unwrap();
    assert_eq!(reread, generated);
    let rewritten = serde_json::to_string_pretty(&sorted(serde_json::to_value(&reread).unwrap())).unwrap() + "\n";
    assert_eq!(rewritten, text);

    let direct = check_helly(&generated, 7, &Predicate::ContainsKColinear { k: 3 }, &EngineConfig::default()).unwrap();
    let direct = serde_json::to_string_pretty(&sorted(serde_json::to_value(&direct).unwrap())).unwrap() + "\n";
    let out = helly(&["check", "--family", path_str(&file), "-m", "7", "--predicate", "colinear", "-k", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), direct);
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate_discrete(dir.path(), 2);
    let args = ["check", "--family", path_str(&file), "-m", "5", "--predicate", "lattice"];
    let one = helly(&[&args[..], &["--jobs", "1"]].concat());
    let two = helly(&[&args[..], &["--jobs", "2"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_helly")).args(args).env("HELLY_JOBS", "3").output().unwrap();
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(one.stdout, env.stdout);
    assert!(one.status.success());
}

#[test]
fn sampling_depends_only_on_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate_discrete(dir.path(), 3);
    let args = ["check", "--family", path_str(&file), "-m", "3", "--predicate", "lattice", "--subset-cap", "100", "--samples", "50"];
    let a = helly(&[&args[..], &["--seed", "7"]].concat());
    let b = helly(&[&args[..], &["--seed", "7"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["sampled"], true);
    assert_eq!(report["total"], 50);
}

#[test]
fn gamma_near_zero() {
    let out = helly(&["gamma", "--c", "0.01", "--dmax", "200"]);
    assert!(out.status.success());
    assert!(json(&out)["value"].as_f64().unwrap() > 0.97);

    let csv = helly(&["gamma", "--c", "0.1", "0.2", "--dmax", "50", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c,gamma,argmin_d,gaussian_limit,d_max");
    assert_eq!(lines.len(), 3);
}

#[test]
fn beta_table_and_csv() {
    let out = helly(&["beta", "--alpha", "1", "--c", "0.01", "-d", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(row[5].parse::<f64>().unwrap() > 0.55);
    let table = helly(&["beta", "--alpha", "0.5", "--c", "0.3", "-d", "3", "--colorful", "--format", "table"]);
    assert!(String::from_utf8(table.stdout).unwrap().contains("colorful  true"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(helly(&["check"]).status.code(), Some(2));
    assert_eq!(helly(&["generate", "--construction", "discrete-tight", "--params", "q=1"]).status.code(), Some(2));
    assert_eq!(helly(&["diameter", "--family", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(helly(&["gamma", "--c", "2"]).status.code(), Some(2));
    assert_eq!(helly(&["diameter", "--family", "/nonexistent.json", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn lattice_diameter_and_lift() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate_discrete(dir.path(), 2);
    let f = path_str(&file);

    let two = json(&helly(&["lattice", "--family", f, "-k", "2"]));
    assert_eq!(two["k"], 2);
    assert_eq!(json(&helly(&["lattice", "--family", f, "-k", "3"])), Value::String("none".into()));

    let diam = json(&helly(&["diameter", "--family", f, "--norm", "linf"]));
    assert_eq!(diam["diameter"]["kind"], "finite");
    // Euclidean diameters of intersections of hulls are not supported.
    assert_eq!(helly(&["diameter", "--family", f, "--norm", "l2"]).status.code(), Some(2));

    let lifted = dir.path().join("lift.json");
    let out = helly(&["lift", "--family", f, "--kind", "discrete", "-k", "3", "-o", path_str(&lifted)]);
    assert!(out.status.success());
    let family = Family::from_json(&std::fs::read_to_string(&lifted).unwrap()).unwrap();
    assert_eq!(family.dim(), 4);
    assert_eq!(family.lift().unwrap().kind, "discrete");
}

#[test]
fn minkowski_family_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("mk.json");
    let out = helly(&["generate", "--construction", "minkowski-tight", "--params", "norm=linf,d=2", "-o", path_str(&file)]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["verified"], true);
    assert_eq!(report["subset_diameters"].as_array().unwrap().len(), 8);
    let l2 = json(&helly(&["diameter", "--family", path_str(&file), "--norm", "l2"]));
    assert_eq!(l2["squared_diameter"]["kind"], "finite");

    // The whole family has rho-diameter 2 >= 1, so every 8-subset passes.
    let cert = helly(&["certify", "--family", path_str(&file), "--norm", "linf", "--steps", "6"]);
    assert!(cert.status.success(), "{}", String::from_utf8_lossy(&cert.stderr));
    let cert = json(&cert);
    assert_eq!(cert["outcome"], "certified");
    assert_eq!(cert["beta_sequence"].as_array().unwrap().len(), 6);

    let width = dir.path().join("w.json");
    let out = helly(&["lift", "--family", path_str(&file), "--kind", "width", "--v", "1,0", "-o", path_str(&width)]);
    assert!(out.status.success());
    let check = helly(&["check", "--family", path_str(&width), "-m", "4", "--predicate", "nonempty", "--format", "table"]);
    assert!(check.status.success());
    assert!(String::from_utf8(check.stdout).unwrap().contains("hypothesis_holds"));
}

#[test]
fn generate_without_out_prints_family_and_verification() {
    let out = helly(&["generate", "--construction", "discrete-tight", "--params", "d=1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["family"]["members"].as_array().unwrap().len(), 2);
    assert_eq!(v["verification"]["verified"], true);
}
