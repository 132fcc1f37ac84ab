use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn planarop(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planarop"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("run planarop")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Header line and data rows of a CSV artifact.
fn read_csv(path: &Path) -> (Value, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    lines.next();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn geometry_reports_pre_critical_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = planarop(dir.path(), &["geometry", "--a", "3.7619", "--c", "6.9168", "--t", "4.0557"]);
    assert!(out.status.success());
    let g = read_json(&dir.path().join("geometry.json"));
    assert_eq!(g["regime"]["tag"], "PreCritical");
    assert!((g["geometry"]["rho"].as_f64().unwrap() - 2.1).abs() < 1e-3);
    for f in ["branch_cut.csv", "lens_plus.csv", "lens_minus.csv"] {
        let (header, rows) = read_csv(&dir.path().join(f));
        assert_eq!(header["command"], "geometry");
        assert_eq!(header["columns"][0], "x");
        assert!(rows.len() > 10);
    }
}

#[test]
fn geometry_at_the_critical_time() {
    let dir = tempfile::tempdir().unwrap();
    assert!(planarop(dir.path(), &["geometry", "--a", "1", "--c", "1", "--t", "3"]).status.success());
    let g = read_json(&dir.path().join("geometry.json"));
    assert_eq!(g["regime"]["tag"], "Critical");
    assert_eq!(g["beta"][0].as_f64().unwrap(), 2.0);
    assert_eq!(g["b"][0].as_f64().unwrap(), 2.0);
}

#[test]
fn post_critical_geometry_includes_the_zero_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = planarop(dir.path(), &["geometry", "--a", "1", "--c", "0.1666666", "--n", "59", "--N", "30", "--r", "0"]);
    assert!(out.status.success());
    assert_eq!(read_json(&dir.path().join("geometry.json"))["regime"]["tag"], "PostCritical");
    assert!(dir.path().join("zero_curve.csv").exists());
}

#[test]
fn solver_failures_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = planarop(dir.path(), &["zero-curve", "--n", "25", "--N", "30"]);
    assert_eq!(out.status.code(), Some(2));
    let diag: Value = serde_json::from_slice(out.stderr.trim_ascii()).unwrap();
    assert_eq!(diag["error"], "Regime");
}

#[test]
fn bad_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = planarop(dir.path(), &["density", "--n", "25", "--N", "30", "--grid", "0:1:1,0:1:5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn grid_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["density", "--n", "25", "--N", "30", "--grid", "-2:3:21,-2:2:17"];
    assert!(planarop(dir.path(), &args).status.success());
    let first = std::fs::read(dir.path().join("density.csv")).unwrap();
    assert!(planarop(dir.path(), &args).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("density.csv")).unwrap());
    let (_, rows) = read_csv(&dir.path().join("density.csv"));
    assert_eq!(rows.len(), 21 * 17);
}

#[test]
fn hm_table_carries_the_residual_column() {
    let dir = tempfile::tempdir().unwrap();
    assert!(planarop(dir.path(), &["hm-table", "--smin", "-8", "--smax", "8"]).status.success());
    let (header, rows) = read_csv(&dir.path().join("hm_table.csv"));
    assert!(header["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(header["columns"][4], "residual");
    assert_eq!(rows[0][0], "-8.0");
}

#[test]
fn oracle_zeros_of_p59() {
    let dir = tempfile::tempdir().unwrap();
    assert!(planarop(dir.path(), &["oracle", "--n", "59", "--N", "30", "--a", "1", "--m", "5"]).status.success());
    let (_, rows) = read_csv(&dir.path().join("zeros.csv"));
    assert_eq!(rows.len(), 59);
    let report = read_json(&dir.path().join("oracle.json"));
    assert_eq!(report["coefficients"].as_array().unwrap().len(), 60);
    assert_eq!(report["coefficients"][59].as_str().unwrap().trim_start_matches('+').chars().next(), Some('1'));
}

#[test]
fn validate_passes_in_each_regime() {
    for n in ["25", "59", "55"] {
        let dir = tempfile::tempdir().unwrap();
        let out = planarop(dir.path(), &["validate", "--n", n, "--N", "30"]);
        assert!(out.status.success(), "n = {n}: {}", String::from_utf8_lossy(&out.stdout));
        let v = read_json(&dir.path().join("validation.json"));
        assert_eq!(v["pass"], true);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    }
}

#[test]
fn eval_matches_the_oracle_outside_the_cut() {
    let dir = tempfile::tempdir().unwrap();
    let out = planarop(dir.path(), &["eval", "--n", "59", "--N", "30", "--z", "2.5,0", "--exact"]);
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("eval.csv"));
    assert_eq!(rows[0][2], "ext");
    let rel: f64 = rows[0][9].parse().unwrap();
    assert!(rel < 0.05, "{rel}");
}

#[test]
fn eval_reads_a_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("points.txt");
    std::fs::write(&file, "# probes\n2.5,0\n-1.5 0.5\n\n0.3,-2.0  # below\n").unwrap();
    let out = planarop(dir.path(), &["eval", "--n", "25", "--N", "30", "--points", file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("eval.csv"));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][0], "-1.5");
    assert!(rows.iter().all(|r| r[5].parse::<f64>().unwrap().is_finite()));
}

#[test]
fn hn_reports_asymptotic_and_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    assert!(planarop(dir.path(), &["hn", "--n", "59", "--N", "30"]).status.success());
    let v = read_json(&dir.path().join("hn.json"));
    let (asym, exact, diff) =
        (v["log_hn_asym"].as_f64().unwrap(), v["log_hn_exact"].as_f64().unwrap(), v["diff"].as_f64().unwrap());
    assert!((asym - exact - diff).abs() < 1e-12);
    assert!(diff.abs() < 3.0 / 30.0, "{diff}");
}
