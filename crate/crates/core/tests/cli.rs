use std::process::{Command, Output};

fn green(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_green")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const DISK: &str = r#"{"type":"disk","center":[0,0],"radius":1}"#;

#[test]
fn eval_closed_form() {
    let o = green(&["eval", "--domain", DISK, "--z", "0.5,0", "--w", "0,0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("value 0.693147180560"), "{out}");
    assert!(out.contains("method closed_form"), "{out}");
}

#[test]
fn eval_json_with_walks() {
    let o = green(&[
        "eval", "--domain", DISK, "--z", "-0.3,0.4", "--w", "0.5,0.1", "--method", "wos", "--walks", "5000", "--seed",
        "4", "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "wos");
    assert!(v["error_bound"].as_f64().unwrap() > 0.0);
    let again = green(&[
        "eval", "--domain", DISK, "--z", "-0.3,0.4", "--w", "0.5,0.1", "--method", "wos", "--walks", "5000", "--seed",
        "4", "--json",
    ]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn eval_reads_domain_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.json");
    std::fs::write(&path, r#"{"type":"ball3","center":[0,0,0],"radius":2}"#).unwrap();
    let o = green(&["eval", "--domain", path.to_str().unwrap(), "--z", "0.5,0,0", "--w", "0,0,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("value 1.500000000000"));
}

#[test]
fn infeasible_method_exits_with_two() {
    let d = r#"{"type":"circle_domain","outer":{"kind":"circle","center":[0,0],"radius":2},"holes":[{"kind":"small_circle","center":[1,0],"log_radius":-300}]}"#;
    let o = green(&["eval", "--domain", d, "--z", "0.5,0", "--w", "0,0", "--method", "mfs"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("wos"), "{err}");
}

#[test]
fn malformed_domain_exits_with_two() {
    let o = green(&["eval", "--domain", r#"{"type":"disk"}"#, "--z", "0,0", "--w", "0.1,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = green(&["reproduce", "no-such-study"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reproduce_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = green(&["reproduce", "lemma-oneside", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("lemma-oneside.csv")).unwrap();
    assert!(csv.starts_with("n,sup_two_sided,one_sided_M_n,compact_sup,components,err\n"), "{csv}");
    assert_eq!(csv.lines().count(), 1 + 7);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("lemma-oneside.json")).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
}

#[test]
fn reproduce_exit_code_reflects_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    // the sup check needs some n ≥ 8
    let o = green(&["reproduce", "ex-annulus", "--n", "4", "--out", out]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn converge_on_nested_disks() {
    let dir = tempfile::tempdir().unwrap();
    let seq = r#"{
        "members": [
            {"n": 1, "domain": {"type":"disk","center":[0,0],"radius":1.0}},
            {"n": 2, "domain": {"type":"disk","center":[0,0],"radius":1.5}},
            {"n": 4, "domain": {"type":"disk","center":[0,0],"radius":1.75}}
        ],
        "limit": {"type":"disk","center":[0,0],"radius":2.0},
        "base_point": [0, 0]
    }"#;
    let path = dir.path().join("seq.json");
    std::fs::write(&path, seq).unwrap();
    let out = dir.path().join("out");
    let o = green(&["converge", "--sequence", path.to_str().unwrap(), "--grid", "0.05", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    // g_{D(0,2)} − g_{D(0,1)} = log 2 on the unit disk
    assert!((first[2] - 2f64.ln()).abs() < 1e-9, "{csv}");
    assert!(out.join("report.json").exists());
}
