//! End-to-end runs of the `latkit` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use latkit_core::enumerate::shortest_vector;
use latkit_core::{brute_force_within, EnumerationRequest, LatticeFile};
use serde_json::Value;

fn corpus_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.json"))
}

fn latkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latkit")).args(args).output().expect("run latkit")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn basis_args<'a>(cmd: &'a str, path: &'a Path) -> Vec<String> {
    vec![cmd.to_string(), "--basis".into(), path.display().to_string()]
}

fn run(args: Vec<String>) -> Output {
    latkit(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn lambda1_of_z2() {
    let v = json(&run(basis_args("lambda1", &corpus_file("Z2"))));
    assert_eq!(v["lambda1"], 1.0);
    assert_eq!(v["kissing"], 4);
    assert_eq!(v["name"], "Z2");
}

#[test]
fn mass_of_z1() {
    let mut args = basis_args("mass", &corpus_file("Z1"));
    args.extend(["--s".into(), "1".into()]);
    let v = json(&run(args));
    let value = v["value"].as_f64().unwrap();
    assert!((value - 1.086_434_811_2).abs() < 1e-10);
    assert!(v["lower"].as_f64().unwrap() <= value && value <= v["upper"].as_f64().unwrap());
}

#[test]
fn shifted_mass_and_bad_shift() {
    let mut args = basis_args("mass", &corpus_file("Z2"));
    args.extend(["--s", "1", "--t", "0.5,0.5"].map(String::from));
    let shifted = json(&run(args))["value"].as_f64().unwrap();
    let mut args = basis_args("mass", &corpus_file("Z2"));
    args.extend(["--s", "1"].map(String::from));
    let centered = json(&run(args))["value"].as_f64().unwrap();
    assert!(shifted < centered);

    let mut args = basis_args("mass", &corpus_file("Z2"));
    args.extend(["--s", "1", "--t", "0.5"].map(String::from));
    let out = run(args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--t"));
}

#[test]
fn eta_mu_and_beta() {
    let eta = json(&run(basis_args("eta", &corpus_file("Z1"))));
    assert!((eta["eta"].as_f64().unwrap() - 0.668).abs() < 1e-3);
    let mu = json(&run(basis_args("mu", &corpus_file("Z2"))));
    assert!((mu["mu_lo"].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert!(mu["mu_hi"].as_f64().unwrap() >= mu["mu_lo"].as_f64().unwrap());
    let mut args = basis_args("beta", &corpus_file("D4"));
    args.extend(["--alpha-max", "1"].map(String::from));
    let beta = json(&run(args));
    assert!((beta["beta_hat"].as_f64().unwrap() - 24f64.log2() / 4.0).abs() < 1e-12);
}

#[test]
fn missing_basis_file_is_an_input_error() {
    let out = latkit(&["lambda1", "--basis", "/nonexistent/lattice.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/lattice.json"));
}

#[test]
fn verify_small_corpus_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    for name in ["Z2", "Z4", "D4"] {
        fs::copy(corpus_file(name), corpus.join(format!("{name}.json"))).unwrap();
    }
    let out_dir = dir.path().join("out");
    let out = latkit(&[
        "verify",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--shifts",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lattices"], 3);
    assert_eq!(v["failures"], 0);
    for file in ["report.csv", "invariants.csv", "summary.md", "chart.svg"] {
        assert!(out_dir.join(file).is_file(), "{file} missing");
    }
    let report = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(report.starts_with("lattice_name,"));
    assert!(report.contains("SANDWICH_EQ2"));
    let svg = fs::read_to_string(out_dir.join("chart.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn empty_corpus_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        latkit(&["verify", "--corpus", dir.path().to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty corpus"));
}

#[test]
fn singular_basis_file_is_named() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(corpus_file("Z2"), dir.path().join("Z2.json")).unwrap();
    let bad = dir.path().join("flat.json");
    fs::write(&bad, r#"{"name": "flat", "dim": 2, "basis": [[1, 2], [2, 4]]}"#).unwrap();
    let out =
        latkit(&["verify", "--corpus", dir.path().to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("flat.json"), "{err}");
    assert!(err.to_lowercase().contains("singular"), "{err}");
}

#[test]
fn invalid_tolerance_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(corpus_file("Z2"), dir.path().join("Z2.json")).unwrap();
    let out = latkit(&[
        "verify",
        "--corpus",
        dir.path().to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
        "--mass-tol",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mass-tol"));
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let a = latkit(&["gen", "--dim", "4", "--seed", "11", "--style", "unimodular_of_Zn"]);
    let b = latkit(&["gen", "--dim", "4", "--seed", "11", "--style", "unimodular_of_Zn"]);
    assert_eq!(a.stdout, b.stdout);
    let file = LatticeFile::parse(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    let l = file.to_lattice().unwrap();
    assert_eq!(l.exact_det().map(ToString::to_string).as_deref(), Some("1"));

    let dir = tempfile::tempdir().unwrap();
    let out = latkit(&[
        "gen",
        "--dim",
        "3",
        "--seed",
        "42",
        "--style",
        "integer_entries",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let v = json(&out);
    let name = v["name"].as_str().unwrap();
    let saved = LatticeFile::load(&dir.path().join(format!("{name}.json"))).unwrap();
    let l = saved.to_lattice().unwrap();
    // First minimum against the brute-force oracle.
    let sv = shortest_vector(&l).unwrap();
    let ball = brute_force_within(&l, &EnumerationRequest::around_origin(3, sv.dist * (1.0 + 1e-9))).unwrap();
    let min = ball.iter().filter(|p| p.coeffs.iter().any(|&c| c != 0)).map(|p| p.dist).fold(f64::INFINITY, f64::min);
    assert!((min - sv.dist).abs() < 1e-12);
    let none = brute_force_within(&l, &EnumerationRequest::around_origin(3, sv.dist * (1.0 - 1e-9))).unwrap();
    assert_eq!(none.len(), 1);
}

#[test]
fn gen_rejects_bad_style() {
    let out = latkit(&["gen", "--dim", "3", "--style", "haar"]);
    assert_eq!(out.status.code(), Some(2));
}
