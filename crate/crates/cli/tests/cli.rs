//! End-to-end runs of the `lpst` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lpst(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpst"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn diagnostic(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr is a JSON diagnostic")
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn norm_reports_every_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    fs::write(&m, "# rotation\n2 2\n0 -1\n1 0\n").unwrap();
    let out = dir.path().join("out");
    let o = lpst(&["norm", "--matrix", m.to_str().unwrap(), "--p", "1,1.5,2,3"], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out.join("norm.csv"));
    assert_eq!(rows.len(), 4);
    for r in rows {
        let (lo, up): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        assert!(lo <= up && (lo - 1.0).abs() < 1e-9, "{r:?}");
    }
    assert!(out.join("norm.json").exists());
}

#[test]
fn group_writes_tables_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("a.txt");
    fs::write(&coeffs, "1 1\n-1 0.5j\n").unwrap();
    let out = dir.path().join("out");
    let o = lpst(&["group", "--group", "z", "--radius", "5", "--coeffs", coeffs.to_str().unwrap()], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out.join("group.csv"));
    assert_eq!(rows.len(), 5);
    for r in &rows {
        let (lo, bound): (f64, f64) = (r[3].parse().unwrap(), r[5].parse().unwrap());
        assert!(lo <= bound + 1e-9);
    }
    let plot = fs::read_to_string(out.join("plot/group_commutator_lower_p2.dat")).unwrap();
    assert!(plot.starts_with("# "));
}

#[test]
fn uhf_explicit_and_spec_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let o = lpst(&["uhf", "--dims", "1,2,2", "--alpha", "0,1,2", "--p", "2"], &a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let spec = dir.path().join("spec.toml");
    fs::write(&spec, "dims = [1, 2, 2]\nalpha = { explicit = [0, 1, 2] }\np = [2]\n").unwrap();
    let b = dir.path().join("b");
    let o = lpst(&["uhf", "--spec", spec.to_str().unwrap()], &b);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["uhf_levels.csv", "uhf_spectrum.csv", "uhf_cn.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let spectrum = csv_rows(&a.join("uhf_spectrum.csv"));
    let ev: Vec<f64> = spectrum.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(ev.len(), 4);
    assert!((ev[3] - 2.0).abs() < 1e-8);
}

#[test]
fn uhf_auto_alpha_is_degenerate_but_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = lpst(&["uhf", "--dims", "1,2", "--alpha", "auto"], &out);
    assert_eq!(o.status.code(), Some(2));
    let d = diagnostic(&o);
    assert_eq!(d["kind"], "degenerate");
    assert_eq!(d["level"], 1);
    let cn = csv_rows(&out.join("uhf_cn.csv"));
    assert_eq!(&cn[0][3], "inf");
}

#[test]
fn metric_between_point_states() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let v = dir.path().join("v.txt");
    fs::write(&w, "point 0\n").unwrap();
    fs::write(&v, "point 1\n").unwrap();
    let out = dir.path().join("out");
    let o = lpst(
        &["metric", "--dims", "1,2", "--alpha", "0,1", "--states", w.to_str().unwrap(), v.to_str().unwrap()],
        &out,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out.join("metric.csv"));
    assert_eq!(rows.len(), 1);
    let lower: f64 = rows[0][3].parse().unwrap();
    assert!((lower - 2.0).abs() < 5e-3, "{lower}");
    assert!(out.join(&rows[0][5]).exists());
}

#[test]
fn config_file_runs_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "seed = 3\nout = \"res\"\n[experiment]\nkind = \"check\"\nquick = true\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lpst"))
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("res/check.csv"));
    assert!(rows.len() > 30);
    assert!(rows.iter().all(|r| &r[3] == "0"));
}

#[test]
fn parse_errors_name_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("bad.txt");
    fs::write(&m, "2 2\n1 0\n0 x\n").unwrap();
    let o = lpst(&["norm", "--matrix", m.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let d = diagnostic(&o);
    assert_eq!(d["line"], 3);
    assert!(d["path"].as_str().unwrap().ends_with("bad.txt"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let missing = lpst(&["norm", "--matrix", "/nonexistent/m.txt"], &out);
    assert_eq!(missing.status.code(), Some(2));

    let cap = lpst(&["uhf", "--dims", "1,2,2", "--alpha", "0,1,2", "--tower-cap", "3"], &out);
    assert_eq!(cap.status.code(), Some(2), "cap change without override");
    let cap = lpst(
        &["uhf", "--dims", "1,2,2", "--alpha", "0,1,2", "--tower-cap", "3", "--cap-override"],
        &out,
    );
    assert_eq!(cap.status.code(), Some(3));
    assert_eq!(diagnostic(&cap)["cap"], 3);

    let bad_p = lpst(&["check", "--quick", "--p", "0.5"], &out);
    assert_eq!(bad_p.status.code(), Some(2));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let unwritable = lpst(&["check", "--quick"], &blocker.join("sub"));
    assert_eq!(unwritable.status.code(), Some(1));
}
