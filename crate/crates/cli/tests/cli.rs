use std::path::PathBuf;
use std::process::{Command, Output};

use polyescape::report::Report;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn polyescape(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyescape")).args(args).output().expect("binary runs")
}

fn run(cmd: &str, file: &str, extra: &[&str]) -> Output {
    let path = instance(file);
    let mut args = vec![cmd, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    polyescape(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn decide_exit_codes() {
    assert_eq!(run("decide", "scalar_growth_b3.json", &[]).status.code(), Some(0));
    let trapped = run("decide", "trapped_zero.json", &[]);
    assert_eq!(trapped.status.code(), Some(1));
    assert!(stdout(&trapped).contains("fixed point witness: (0, 0)"));
    let unbounded = run("decide", "unbounded.json", &[]);
    assert_eq!(unbounded.status.code(), Some(2));
    assert!(stdout(&unbounded).contains("compact"));
}

#[test]
fn malformed_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"A": [["1/0"]], "B": [["1"]], "c": ["1"]}"#).unwrap();
    let o = polyescape(&["decide", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("A[0][0]"));
    let missing = dir.path().join("missing.json");
    assert_eq!(polyescape(&["decide", "--input", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn bound_reports_and_preconditions() {
    let o = run("bound", "scalar_growth_b3.json", &["--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["certificate"]["total_bound"]["form"], "exact");
    let total: f64 = r["certificate"]["total_bound"]["value"].as_str().unwrap().parse().unwrap();
    assert!(total >= 8.0 * std::f64::consts::LN_2);

    let rot = run("bound", "rotation.json", &["--format", "json"]);
    let value = json(&rot)["certificate"]["complex_hull_time"]["value"].as_str().unwrap().to_string();
    let (p, q) = value.split_once('/').unwrap();
    let tc = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
    assert!((std::f64::consts::PI..std::f64::consts::PI + 1e-12).contains(&tc));

    assert_eq!(run("bound", "trapped_zero.json", &[]).status.code(), Some(4));
    assert!(stdout(&run("bound", "jordan_3x3.json", &[])).contains("exp("));
}

#[test]
fn json_report_round_trips() {
    for (cmd, file) in [("bound", "jordan_3x3.json"), ("simulate", "rotation.json"), ("validate", "discrete_doubling.json")] {
        let o = run(cmd, file, &["--format", "json", "--samples", "3"]);
        let text = String::from_utf8(o.stdout).unwrap();
        let r: Report = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&r).unwrap();
        assert_eq!(text.trim_end(), again);
    }
}

#[test]
fn reports_are_deterministic_apart_from_timings() {
    let strip = |o: Output| {
        let mut v = json(&o);
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let a = strip(run("validate", "rotation.json", &["--format", "json", "--samples", "4", "--seed", "9"]));
    let b = strip(run("validate", "rotation.json", &["--format", "json", "--samples", "4", "--seed", "9"]));
    assert_eq!(a, b);
}

#[test]
fn simulate_examples() {
    let o = run("simulate", "scalar_growth_b3.json", &["--x0", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let upper = r["runs"][0]["escape"]["upper"].as_str().unwrap().to_string();
    let (p, q) = upper.split_once('/').unwrap();
    let t = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
    assert!((t - 8.0 * std::f64::consts::LN_2).abs() < 1e-6);

    let d = run("simulate", "discrete_doubling.json", &["--x0", "1", "--format", "json"]);
    assert_eq!(json(&d)["runs"][0]["escape"]["steps"], 2);

    assert_eq!(run("simulate", "scalar_growth_b3.json", &["--x0", "3"]).status.code(), Some(3));
    assert_eq!(run("simulate", "scalar_growth_b3.json", &["--x0", "1,1"]).status.code(), Some(3));
}

#[test]
fn trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("simulate", "rotation.json", &["--x0", "3/2,0", "--trace-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("run_0000.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,inside"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert!(rows.len() > 2);
    assert!(rows.windows(2).all(|w| w[0][0] <= w[1][0]));
    assert_eq!(rows.last().unwrap()[3], 0.0);
    assert!(rows[..rows.len() - 1].iter().all(|r| r[3] == 1.0));
}

#[test]
fn validate_passes_and_detects_corruption() {
    assert_eq!(run("validate", "scalar_growth_b3.json", &["--samples", "5"]).status.code(), Some(0));
    assert_eq!(run("validate", "rotation.json", &["--samples", "5"]).status.code(), Some(0));
    assert_eq!(run("validate", "trapped_zero.json", &[]).status.code(), Some(4));

    let dir = tempfile::tempdir().unwrap();
    let cert = run("bound", "scalar_growth_b3.json", &["--format", "json"]);
    let mut report = json(&cert);
    // true escape from x0 = 1 is 8 log 2 ~ 5.545
    report["certificate"]["total_bound"] = serde_json::json!({"form": "exact", "value": "5/2"});
    let path = dir.path().join("corrupt.json");
    std::fs::write(&path, serde_json::to_string(&report).unwrap()).unwrap();
    let o = run("validate", "scalar_growth_b3.json", &["--certificate", path.to_str().unwrap(), "--samples", "2"]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stdout(&o).contains("FAILED"));
}

#[test]
fn affine_instances_are_homogenized() {
    let o = run("bound", "affine_drift.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("homogenizing"));
    let s = run("simulate", "affine_drift.json", &["--x0", "1", "--format", "json"]);
    let upper = json(&s)["runs"][0]["escape"]["upper"].as_str().unwrap().to_string();
    let t: f64 = match upper.split_once('/') {
        Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
        None => upper.parse().unwrap(),
    };
    assert!((t - 1.0).abs() < 1e-8);
}
