use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gm")).args(args).env_remove("GM_SEED").output().expect("gm runs")
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn scenario(name: &str) -> String {
    scenarios_dir().join(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn bundled_scenarios_all_pass() {
    let mut files: Vec<String> = fs::read_dir(scenarios_dir())
        .unwrap()
        .map(|e| e.unwrap().path().display().to_string())
        .filter(|p| p.ends_with(".json"))
        .collect();
    files.sort();
    assert!(files.len() >= 20);
    let mut args = vec!["run", "--parallel"];
    args.extend(files.iter().map(String::as_str));
    let out = gm(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout(&out);
    let mut lines = report.lines();
    assert_eq!(lines.next(), Some("scenario,check,lhs,rhs,abs_err,rel_err,tolerance,pass"));
    assert!(lines.all(|l| l.ends_with(",true")));
}

#[test]
fn pair3_homology_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.csv");
    let out = gm(&["run", &scenario("pair3_homology.json"), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    let betti: Vec<f64> = reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| r[1].starts_with("betti["))
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert_eq!(betti, [1.0, 0.0, 0.0]);
}

#[test]
fn json_report_has_rows_and_summary() {
    let out = gm(&["run", "--format", "json", &scenario("swap_traces.json")]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let total = value["summary"]["total"].as_u64().unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len() as u64, total);
    assert_eq!(value["summary"]["failed"], 0);
}

#[test]
fn zero_tolerance_on_a_quadrature_check_fails() {
    let out = gm(&["run", "--tol", "stokes=0", &scenario("foliated_square.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("FAIL foliated_square stokes"), "{}", stderr(&out));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"name\": \"x\",\n  \"engine\": finite\n}\n").unwrap();
    let out = gm(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.json:3:"), "{}", stderr(&out));
}

#[test]
fn unknown_check_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unknown.json");
    fs::write(&path, r#"{"name": "x", "engine": "finite", "model": {"kind": "swap"}, "checks": [{"name": "weyl"}]}"#)
        .unwrap();
    let out = gm(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("unknown check `weyl`") && err.contains("coinvariants"), "{err}");
}

#[test]
fn missing_file_is_an_error() {
    let out = gm(&["run", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn list_checks() {
    let all = gm(&["list-checks"]);
    assert_eq!(all.status.code(), Some(0));
    assert!(stdout(&all).lines().count() >= 25);
    let finite = gm(&["list-checks", "--engine", "finite"]);
    let lines: Vec<String> = stdout(&finite).lines().map(String::from).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l.split_whitespace().nth(1) == Some("finite")), "{lines:?}");
    let none = gm(&["list-checks", "--engine", "quantum"]);
    assert_eq!(none.status.code(), Some(0));
    assert!(stdout(&none).is_empty());
}

#[test]
fn seed_override_is_deterministic() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_gm"))
            .args(["run", &scenario("rotation_plane.json")])
            .env("GM_SEED", seed)
            .output()
            .unwrap()
    };
    let (a, b, c) = (run("11"), run("11"), run("12"));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(run("not-a-number").status.code(), Some(2));
}
