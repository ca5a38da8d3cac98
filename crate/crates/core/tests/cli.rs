use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use qft::format::{load_signal, save_signal, SignalFormat};
use qft::{gaussian, Grid2};
use serde_json::Value;

fn qft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qft"))
        .args(args)
        .output()
        .expect("spawn qft")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.qsig");
    let nowhere = dir.path().join("no/such/dir/out.qspec");
    assert_eq!(qft(&["--help"]).status.code(), Some(0));
    assert_eq!(qft(&["verify", "--bogus"]).status.code(), Some(1));
    assert_eq!(qft(&["transform"]).status.code(), Some(1));
    assert_eq!(qft(&["verify", "--threads", "0"]).status.code(), Some(1));
    assert_eq!(qft(&["hardy", "--band", "1.5"]).status.code(), Some(1));
    assert_eq!(qft(&["bench", "--sizes", "7"]).status.code(), Some(1));
    assert_eq!(qft(&["transform", "--in", path(&missing), "--out", "x"]).status.code(), Some(2));
    assert_eq!(qft(&["transform", "--out", path(&nowhere)]).status.code(), Some(2));
    let wrong = qft(&["hardy", "--bounds", "2pi,2pi", "--expect", "many-solutions"]);
    assert_eq!(wrong.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&wrong.stderr).starts_with("qft: "));
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.qsig");
    std::fs::write(&p, "QSIG v1 discrete 2 2 1 1\n0,0,1,0,0,0\n1,0,zz,0,0,0\n").unwrap();
    let out = qft(&["transform", "--in", path(&p), "--out", path(&dir.path().join("s"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn transform_then_inverse_restores_the_signal() {
    let dir = tempfile::tempdir().unwrap();
    let f = gaussian(2.0, Grid2::square(32, 4.0).unwrap())
        .unwrap()
        .left_mul(qft::Quaternion::new(1.0, -0.5, 0.25, 2.0));
    for (name, fmt) in [("text", SignalFormat::Text), ("binary", SignalFormat::Binary)] {
        let input = dir.path().join(format!("in.{name}"));
        let spec = dir.path().join(format!("spec.{name}"));
        let back = dir.path().join(format!("back.{name}"));
        save_signal(&f, &input, fmt).unwrap();
        let t = qft(&["transform", "--in", path(&input), "--out", path(&spec)]);
        assert_eq!(t.status.code(), Some(0));
        assert_eq!(json(&t)["results"][0]["pass"], Value::Bool(true));
        let i = qft(&["inverse", "--in", path(&spec), "--out", path(&back), "--format", name]);
        assert_eq!(i.status.code(), Some(0));
        let g = load_signal(&back).unwrap();
        assert_eq!(g.grid, f.grid);
        assert!(g.max_abs_diff(&f) <= 1e-12);
    }
}

#[test]
fn heisenberg_report_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("h.dat");
    let out = qft(&["heisenberg", "--plot", path(&plot)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "heisenberg");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["equality_flag"], Value::Bool(true));
        let lhs = r["lhs"].as_f64().unwrap();
        assert!((lhs * 64.0 * PI * PI - 1.0).abs() <= 1e-4);
    }
    let tables = qft::cli::plot::parse(&std::fs::read_to_string(&plot).unwrap());
    let names: Vec<&str> = tables.iter().map(|t| t.name.as_str()).collect();
    assert_eq!(names, ["modulus_slice_x2_0", "heisenberg_refinement"]);
}

#[test]
fn hardy_pipeline_on_generated_signals() {
    let unique = qft(&["hardy", "--signal", "gaussian:2pi", "--expect", "gaussian-unique"]);
    assert_eq!(unique.status.code(), Some(0));
    let v = json(&unique);
    let product = v["reports"]["verdict"]["product_over_pi2"].as_f64().unwrap();
    assert!((product - 1.0).abs() <= 0.02);

    let many = qft(&["hardy", "--signal", "phi:2:2", "--expect", "many-solutions"]);
    assert_eq!(many.status.code(), Some(0));
}

#[test]
fn basis_text_table() {
    let out = qft(&["basis", "--kmax", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k l residual"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let r: f64 = row.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert!(r <= 1e-4);
    }
}

#[test]
fn bench_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = qft(&["bench", "--sizes", "8,16", "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "size,method,seconds");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap() > 0.0));
}
