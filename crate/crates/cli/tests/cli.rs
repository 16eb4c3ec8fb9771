use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qradius_core::{json, ComplexVector, DenseOperator, MatrixFile, RankOnePair};
use serde_json::Value;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn vector(&self, name: &str, values: &[f64]) -> String {
        let path = self.path(name);
        std::fs::write(&path, json::to_string(&ComplexVector::from_real(values).unwrap()).unwrap()).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn matrix(&self, name: &str, m: &DenseOperator) -> String {
        let path = self.path(name);
        std::fs::write(&path, json::to_string(&MatrixFile::from_operator(m)).unwrap()).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn raw(&self, name: &str, text: &str) -> String {
        let path = self.path(name);
        std::fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }
}

fn qradius(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qradius")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    reader.records().map(|r| r.unwrap().iter().map(str::to_owned).collect()).collect()
}

fn csv_header(path: &Path) -> Vec<String> {
    csv::Reader::from_path(path).unwrap().headers().unwrap().iter().map(str::to_owned).collect()
}

#[test]
fn radius_of_orthogonal_basis_pair() {
    let ws = Workspace::new();
    let (a, b) = (ws.vector("a.json", &[1.0, 0.0]), ws.vector("b.json", &[0.0, 1.0]));
    let v = stdout_json(&qradius(&["radius", "--a", &a, "--b", &b, "--q", "0.6"]));
    assert!((v["radius"].as_f64().unwrap() - 0.9).abs() <= 1e-15);
    assert!((v["lambda_q"].as_f64().unwrap() - 0.9).abs() <= 1e-15);
    assert_eq!(v["q_star"].as_f64().unwrap(), 0.0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 4);
    for k in ["q", "radius", "lambda_q", "q_star"] {
        assert!(keys.contains(&k));
    }
}

#[test]
fn radius_of_equal_vectors() {
    let ws = Workspace::new();
    let a = ws.vector("a.json", &[1.0, 0.0]);
    let v = stdout_json(&qradius(&["radius", "--a", &a, "--b", &a, "--q", "0.5"]));
    assert!((v["radius"].as_f64().unwrap() - 0.75).abs() <= 1e-15);
}

#[test]
fn radius_with_oracle_and_witness() {
    let ws = Workspace::new();
    let (a, b) = (ws.vector("a.json", &[1.0, 0.0]), ws.vector("b.json", &[3.0, 4.0]));
    let v = stdout_json(&qradius(&["radius", "--a", &a, "--b", &b, "--q", "0.5", "--check-oracle", "64", "--witness"]));
    let gap = v["oracle_gap"].as_f64().unwrap();
    assert!((0.0..=1e-3).contains(&gap), "gap {gap}");
    let r = v["radius"].as_f64().unwrap();
    assert_eq!(gap, r - v["oracle_estimate"].as_f64().unwrap());
    let y: ComplexVector = serde_json::from_value(v["witness_y"].clone()).unwrap();
    assert_eq!(y.dim(), 2);
    assert!(v["witness_t"].is_object());
}

#[test]
fn radius_numbers_carry_seventeen_digits() {
    let ws = Workspace::new();
    let (a, b) = (ws.vector("a.json", &[1.0, 0.0]), ws.vector("b.json", &[3.0, 4.0]));
    let out = qradius(&["radius", "--a", &a, "--b", &b, "--q", "0.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"radius\": 4.9820508075688767e0"), "{text}");
}

#[test]
fn radius_with_gram_weight() {
    let ws = Workspace::new();
    let (a, b) = (ws.vector("a.json", &[1.0, 0.0]), ws.vector("b.json", &[0.0, 1.0]));
    let g = ws.matrix("g.json", &DenseOperator::from_real_rows(&[&[2.0, 0.0], &[0.0, 3.0]]).unwrap());
    let v =
        stdout_json(&qradius(&["radius", "--a", &a, "--b", &b, "--q", "0.6", "--gram", &g, "--check-oracle", "32"]));
    // Orthogonal under G, ‖a‖‖b‖ = √6.
    let expected = 0.9 * 6f64.sqrt();
    assert!((v["radius"].as_f64().unwrap() - expected).abs() <= 1e-12);
    let gap = v["oracle_gap"].as_f64().unwrap();
    assert!((-1e-9..=1e-3).contains(&gap));

    let bad = ws.matrix("bad.json", &DenseOperator::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap());
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", &b, "--q", "0.6", "--gram", &bad])), 2);
}

#[test]
fn radius_error_codes() {
    let ws = Workspace::new();
    let a = ws.vector("a.json", &[1.0, 0.0]);
    let z = ws.vector("z.json", &[0.0, 0.0]);
    let three = ws.vector("c.json", &[1.0, 0.0, 0.0]);
    let junk = ws.raw("junk.json", "{\"dim\": 2, \"entries\": [[1, 0]]}");
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", &z, "--q", "0.5"])), 3);
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", &a, "--q", "1.5"])), 2);
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", &a, "--q", "-0.1"])), 2);
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", &junk, "--q", "0.5"])), 2);
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", &three, "--q", "0.5"])), 2);
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", "/nonexistent.json", "--q", "0.5"])), 2);
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--q", "0.5"])), 2);
    assert_eq!(code(&qradius(&["radius", "--a", &a, "--b", &a, "--q", "half"])), 2);
}

#[test]
fn estimate_examples() {
    let ws = Workspace::new();
    let id = ws.matrix("i.json", &DenseOperator::identity(3));
    let v = stdout_json(&qradius(&["estimate", "--matrix", &id, "--q", "0.3"]));
    assert!((v["estimate"].as_f64().unwrap() - 0.3).abs() <= 1e-9);

    let nil = ws.matrix("n.json", &DenseOperator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap());
    let v = stdout_json(&qradius(&["estimate", "--matrix", &nil, "--q", "0.6", "--restarts", "32", "--seed", "1"]));
    assert!((v["estimate"].as_f64().unwrap() - 0.9).abs() <= 1e-6);
    assert!(v["witness_y"].is_object() && v["witness_t"].is_object());

    let p = RankOnePair::from_real(&[1.0, 0.0], &[3.0, 4.0]).unwrap();
    let m = ws.matrix("p.json", &p.as_matrix());
    let v = stdout_json(&qradius(&["estimate", "--matrix", &m, "--q", "0.5"]));
    assert!((v["estimate"].as_f64().unwrap() - 4.982051).abs() <= 1e-3);

    assert_eq!(code(&qradius(&["estimate", "--matrix", &m, "--q", "2"])), 2);
    assert_eq!(code(&qradius(&["estimate", "--matrix", &m, "--q", "0.5", "--restarts", "0"])), 2);
}

#[test]
fn estimate_uses_gram_field() {
    let ws = Workspace::new();
    let m = ws.raw(
        "m.json",
        r#"{"n": 2, "rows": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]], "gram": [[[4, 0], [0, 0]], [[0, 0], [1, 0]]]}"#,
    );
    // e1·e2ᵀ = b·(Ga)* with a = e2, b = e1 under G = diag(4, 1): orthogonal, ‖a‖‖b‖ = 2.
    let v = stdout_json(&qradius(&["estimate", "--matrix", &m, "--q", "0.6"]));
    assert!((v["estimate"].as_f64().unwrap() - 1.8).abs() <= 1e-6);
}

#[test]
fn range_of_identity_is_q() {
    let ws = Workspace::new();
    let id = ws.matrix("i.json", &DenseOperator::identity(3));
    let out = ws.path("cloud.csv");
    let out_s = out.to_string_lossy().into_owned();
    assert_eq!(code(&qradius(&["range", "--matrix", &id, "--q", "0.3", "--samples", "200", "--out", &out_s])), 0);
    assert_eq!(csv_header(&out), ["re", "im"]);
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 200);
    for row in rows {
        let (re, im): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert!((re - 0.3).abs() <= 1e-12 && im.abs() <= 1e-12, "{row:?}");
    }
}

#[test]
fn range_of_nilpotent_reaches_unit_circle() {
    let ws = Workspace::new();
    let nil = ws.matrix("n.json", &DenseOperator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap());
    let out = ws.path("cloud.csv");
    let out_s = out.to_string_lossy().into_owned();
    let args = ["range", "--matrix", &nil, "--q", "0", "--samples", "100000", "--seed", "9", "--out", &out_s];
    assert_eq!(code(&qradius(&args)), 0);
    let max = read_csv(&out)
        .iter()
        .map(|r| r[0].parse::<f64>().unwrap().hypot(r[1].parse::<f64>().unwrap()))
        .fold(0.0, f64::max);
    assert!((max - 1.0).abs() <= 0.01, "max modulus {max}");
}

#[test]
fn range_to_stdout_and_errors() {
    let ws = Workspace::new();
    let id = ws.matrix("i.json", &DenseOperator::identity(2));
    let out = qradius(&["range", "--matrix", &id, "--q", "-0.2,0.4", "--samples", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next(), Some("re,im"));
    assert_eq!(code(&qradius(&["range", "--matrix", &id, "--q", "0.3", "--samples", "0"])), 2);
    assert_eq!(code(&qradius(&["range", "--matrix", &id, "--q", "0.8,0.8", "--samples", "5"])), 2);
    assert_eq!(code(&qradius(&["range", "--matrix", &id, "--q", "0.1,x", "--samples", "5"])), 2);
}

fn profile_rows(ws: &Workspace, a: &str, b: &str, grid: usize) -> Vec<Vec<String>> {
    let out = ws.path("profile.csv");
    let out_s = out.to_string_lossy().into_owned();
    let result = qradius(&["profile", "--a", a, "--b", b, "--grid", &grid.to_string(), "--out", &out_s]);
    assert_eq!(code(&result), 0, "{}", String::from_utf8_lossy(&result.stderr));
    assert_eq!(csv_header(&out), ["q", "f", "f1", "f2"]);
    read_csv(&out)
}

#[test]
fn profile_peaks_at_q_star() {
    let ws = Workspace::new();
    let (a, b) = (ws.vector("a.json", &[1.0, 0.0]), ws.vector("b.json", &[3.0, 4.0]));
    let rows = profile_rows(&ws, &a, &b, 101);
    assert_eq!(rows.len(), 101);
    let f: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let argmax = (0..f.len()).fold(0, |m, k| if f[k] > f[m] { k } else { m });
    assert_eq!(rows[argmax][0], "0.6");
    assert!((f[argmax] - 5.0).abs() <= 1e-12);

    for (k, row) in rows.iter().enumerate() {
        let interior = k != 0 && k != 100;
        assert_eq!(row[2].is_empty(), !interior);
        assert_eq!(row[3].is_empty(), !interior);
    }
    let f1: Vec<f64> = rows[1..100].iter().map(|r| r[2].parse().unwrap()).collect();
    let changes = f1.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    assert_eq!(changes, 1);
    assert!(f1[0] > 0.0 && f1[98] < 0.0);
}

#[test]
fn profile_of_parallel_pair_has_zero_curvature() {
    let ws = Workspace::new();
    let (a, b) = (ws.vector("a.json", &[1.0, -2.0]), ws.vector("b.json", &[-0.5, 1.0]));
    let rows = profile_rows(&ws, &a, &b, 11);
    for row in &rows[1..10] {
        assert_eq!(row[3].parse::<f64>().unwrap(), 0.0, "{row:?}");
    }
}

#[test]
fn profile_errors() {
    let ws = Workspace::new();
    let (a, z) = (ws.vector("a.json", &[1.0, 0.0]), ws.vector("z.json", &[0.0, 0.0]));
    assert_eq!(code(&qradius(&["profile", "--a", &z, "--b", &a, "--grid", "11"])), 3);
    assert_eq!(code(&qradius(&["profile", "--a", &a, "--b", &a, "--grid", "2"])), 2);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&qradius(&["verify", "--suite", "nonsense"])), 2);
    let v = stdout_json(&qradius(&["verify", "--suite", "buzano", "--trials", "100000"]));
    assert_eq!(v["failures"], 0);
    assert_eq!(v["trials"], 100000);
    assert!(v.get("elapsed").is_none());
    let v = stdout_json(&qradius(&["verify", "--suite", "embedding", "--trials", "3", "--timing"]));
    assert!(v["elapsed"].as_f64().unwrap() >= 0.0);
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--suite", "elementary", "--trials", "20", "--seed", "42"];
    let (first, second) = (qradius(&args), qradius(&args));
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&qradius(&["--help"])), 0);
    assert_eq!(code(&qradius(&["--version"])), 0);
    assert_eq!(code(&qradius(&["bogus-command"])), 2);
}
