use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_driftfreq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn curve_to_file_with_sidecar_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h2.csv");
    let o = run(&[
        "--grid",
        "3:30:50",
        "curve",
        "--model",
        "gc:1:0",
        "--field",
        "hermite:2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 50);
    let last: Vec<&str> = rows[49].split(',').collect();
    assert_eq!(last[0].parse::<f64>().unwrap(), 30.0);
    let u: f64 = last[3].parse().unwrap();
    assert!((u - 2.0045).abs() < 1e-4, "U(30) = {u}");
    assert!(!stdout(&o).is_empty());

    let log = fs::read_to_string(dir.path().join("h2.csv.log")).unwrap();
    assert!(log.contains("exit_code"));
    assert!(log.contains("hermite:2"));
}

#[test]
fn curve_output_is_deterministic() {
    let args = [
        "--grid", "3:20:15", "curve", "--model", "gc:3:2", "--field", "prod:1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "S_corr").unwrap();
    let s: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(col)
        .unwrap()
        .parse()
        .unwrap();
    assert!(s.abs() > 1e-6);
}

#[test]
fn constant_radial_field_has_zero_frequency() {
    let o = run(&[
        "--grid", "2:10:5", "curve", "--model", "gc:3:0", "--field", "radial:0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for row in stdout(&o).lines().skip(1) {
        let u: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(u, 0.0);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["curve", "--model", "gc:x:0", "--field", "hermite:2"],
        vec!["curve", "--model", "gc:1:0", "--field", "nope:2"],
        vec!["selftest", "--model", "gc:2:2"],
        vec!["certify", "--suite", "T99", "--field", "hermite:1"],
        vec!["--grid", "1:0:5", "curve", "--field", "hermite:1"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn certify_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.jsonl");
    let o = run(&[
        "certify",
        "--suite",
        "all",
        "--model",
        "gc:1:0",
        "--field",
        "hermite:4",
        "--epsilon",
        "1",
        "--delta",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let file = fs::read_to_string(&out).unwrap();
    assert_eq!(file, stdout(&o));
    for line in file.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true);
        // C12 reports the gradient field it certifies
        let f = v["field"].as_str().unwrap();
        assert!(f == "hermite:4" || f == "grad:hermite:4", "{f}");
    }
}

#[test]
fn certify_dichotomy_on_growing_field() {
    let o = run(&[
        "certify",
        "--suite",
        "T43",
        "--model",
        "gc:1:0",
        "--field",
        "grow:0.75:odd",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(v["theorem_id"], "T43_dichotomy");
    assert_eq!(v["vacuous"], false);
    assert!(v["R_empirical"].is_number());
}

#[test]
fn certify_constant_field_is_vacuous() {
    let o = run(&["certify", "--suite", "T11", "--field", "hermite:0"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["vacuous"], true);
    }
}

#[test]
fn selftest_passes_with_loose_quadrature() {
    assert_eq!(run(&["selftest"]).status.code(), Some(0));
    assert_eq!(
        run(&["--quad-rtol", "1e-3", "selftest"]).status.code(),
        Some(0)
    );
}

#[test]
fn model_verify() {
    let o = run(&["model", "verify", "--model", "gc:4:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
}
