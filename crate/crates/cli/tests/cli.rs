use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (bool, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_heightcount")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.success(), v, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn conic_param_worked_example() {
    let (ok, v, _) = run(&["conic-param", "--plane", "1,0,0,1", "--quadric", "x0*x1 - x2^2", "--bound", "100", "--verify"]);
    assert!(ok);
    assert_eq!(v["points"], 21);
    assert_eq!(v["agree"], true);
    assert_eq!(v["param"]["classes"][0]["r2"][0], "2*t1^2");
}

#[test]
fn count_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for (name, threads) in [("a", "1"), ("b", "3")] {
        let out = dir.path().join(name);
        let (ok, _, err) = run(&[
            "--threads", threads, "count", "--variety", "x0*x2 - x1^2", "--function", "N", "--bmax", "64", "--grid", "geometric:4",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(ok, "{err}");
        outs.push((std::fs::read(out.join("series.csv")).unwrap(), std::fs::read(out.join("report.json")).unwrap()));
    }
    assert!(outs[0] == outs[1]);
    let csv = String::from_utf8(outs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().next(), Some("B,count"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn fit_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    std::fs::write(&p, "B,count\n10,100\n100,10000\n1000,1000000\n").unwrap();
    let (ok, v, _) = run(&["fit", "--csv", p.to_str().unwrap(), "--target", "2"]);
    assert!(ok);
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["verdict"], true);
    std::fs::write(&p, "B,count\n10,100\n").unwrap();
    let (ok, _, err) = run(&["fit", "--csv", p.to_str().unwrap()]);
    assert!(!ok);
    assert!(err.contains("insufficient data"));
}

#[test]
fn slice_and_errors() {
    let (ok, v, _) = run(&["slice", "--variety", "x0^3 + x1^3 + x2^3", "--bound", "4"]);
    assert!(ok);
    assert_eq!(v["holds"], true);
    let (ok, _, err) = run(&["slice", "--variety", "x0^3 + * x1", "--bound", "4"]);
    assert!(!ok);
    assert!(err.contains("position"), "{err}");
    let (ok, _, err) = run(&["count", "--variety", "x0 - x1", "--function", "Q", "--bmax", "4"]);
    assert!(!ok);
    assert!(err.contains("unknown counting function"));
}

#[test]
fn project_and_detmethod() {
    let (ok, v, _) = run(&[
        "project", "--generators", "x0*x2 - x1^2; x1*x3 - x2^2; x0*x3 - x1*x2", "--bound", "8", "--degree", "3", "--centre", "0,1,0,1",
    ]);
    assert!(ok);
    assert_eq!(v["setup"]["c"], "5");
    let (ok, v, _) = run(&["detmethod", "--variety", "x0*x3 - x1*x2", "--bound", "6"]);
    assert!(ok);
    assert!(v["classes"].as_array().unwrap().iter().all(|c| c["form"] != "IncreaseDegree"));
}

#[test]
fn run_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"variety": {"poly": "t1 - t2^2"}, "grid": {"kind": "list", "values": [100, 1000, 10000]}, "function": "M", "target": 0.5}"#,
    )
    .unwrap();
    let (ok, v, _) = run(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert!(ok);
    assert_eq!(v["fit"]["verdict"], true);
    assert!(dir.path().join("o/report.json").exists());
}
