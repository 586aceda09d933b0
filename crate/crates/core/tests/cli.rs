//! The binary: exit codes, output formats and file options.

use std::path::Path;
use std::process::{Command, Output};

use qlorentz::sigma::fixture::DEFAULT_FIXTURE;

fn qlorentz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlorentz")).args(args).output().expect("binary runs")
}

const DEFORMED: &[&str] = &["--q", "2", "--r", "1/3", "--precision", "40", "--no-timing"];

fn with(extra: &[&str]) -> Vec<String> {
    DEFORMED.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(extra: &[&str]) -> Output {
    let args = with(extra);
    qlorentz(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn passing_suites_exit_zero() {
    let o = run(&["--suite", "metric,rmatrix,sigma"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("point q=2,r=1/3,+"));
    assert!(text.contains("verdict: pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["--q", "2", "--r", "1"],
        vec!["--q", "2", "--r", "1/3", "--suite", "nonsense"],
        vec!["--q", "-1"],
        vec!["--precision", "10"],
        vec!["--q", "2", "--r", "1/3", "--tolerance", "tiny"],
        vec!["--config", "/nonexistent/qlorentz.json"],
    ] {
        let o = qlorentz(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn mutual_inverse_is_the_only_big_r_failure() {
    let o = run(&["--suite", "bigr", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "fail");
    let failed: Vec<&str> = v["points"][0]["suites"][0]["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pass"] == false)
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["bigr-mutual-inverse"]);
}

#[test]
fn json_report_has_the_documented_shape() {
    let o = run(&["--suite", "rmatrix", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["precision_digits"], 40);
    assert_eq!(v["suites"], serde_json::json!(["rmatrix"]));
    let rec = &v["points"][0]["suites"][0]["records"][0];
    for key in ["id", "point", "residual", "tolerance", "expectation", "pass"] {
        assert!(!rec[key].is_null(), "{key}");
    }
    assert!(v["points"][0]["suites"][0].get("wall_time_ms").is_none());
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn untimed_runs_are_byte_identical() {
    let a = run(&["--suite", "sigma,lorentz"]);
    let b = run(&["--suite", "sigma,lorentz"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# two points\npoint = 1, 0\npoint = 2, 1/3, -\nprecision = 40\nsuite = rmatrix\ntiming = false\n").unwrap();
    let o = qlorentz(&["--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pts: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p["point"].as_str().unwrap()).collect();
    assert_eq!(pts, ["q=1,r=0,+", "q=2,r=1/3,-"]);

    let json = dir.path().join("run.json");
    std::fs::write(&json, r#"{"points": [{"q": "3", "r": "0", "branch": "+"}], "precision_digits": 40, "suites": ["metric"]}"#)
        .unwrap();
    let o = qlorentz(&["--config", json.to_str().unwrap(), "--branch", "-", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("point q=3,r=0,-"));
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = run(&["--suite", "rmatrix", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("verdict: pass"));
}

fn emitted(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn emitted_metrics_carry_both_signs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metrics.json");
    let o = run(&["--suite", "rmatrix", "--emit-metrics", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = emitted(&path);
    assert_eq!(v[0]["point"], "q=2,r=1/3,+");
    let signs = v[0]["signs"].as_array().unwrap();
    assert_eq!(signs.len(), 2);
    for s in signs {
        assert_eq!(s["upper"].as_array().unwrap().len(), 4);
        // spatial diagonal entry (1,1) is real and positive
        assert!(!s["upper"][1][1].as_str().unwrap().starts_with('-'));
    }
}

#[test]
fn fixture_override_is_compared() {
    let dir = tempfile::tempdir().unwrap();
    let mut fx: serde_json::Value = serde_json::from_str(DEFAULT_FIXTURE).unwrap();
    fx["upper"][0][0] = "17".into();
    let path = dir.path().join("fixture.json");
    std::fs::write(&path, fx.to_string()).unwrap();
    let o = run(&["--suite", "metric", "--fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL metric-fixture-upper-plus-00"));

    std::fs::write(&path, DEFAULT_FIXTURE.replace("A1", "A1 +")).unwrap();
    assert_eq!(run(&["--suite", "metric", "--fixture", path.to_str().unwrap()]).status.code(), Some(2));
}
