use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn convind(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_convind"))
        .args(args)
        .env("CONVIND_JOBS", "2")
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn report_schema_and_success() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(
        dir.path(),
        "tri.json",
        r#"{"dimension":2,"points":[["0","0"],["2","0"],["0","2"]]}"#,
    );
    let (code, r) = convind(&["compute-e", "--in", &tri]);
    assert_eq!(code, 0);
    assert!(r["schema_version"].is_number());
    assert_eq!(r["manifest"]["command"], "compute-e");
    assert_eq!(r["manifest"]["argv"][2], tri.as_str());
    assert_eq!(r["outcome"], 0);
    assert_eq!(r["result"]["value"], 3);
}

#[test]
fn verify_cubearc_counts() {
    let (code, r) = convind(&["verify-cubearc", "--k", "3"]);
    assert_eq!(code, 0);
    assert!(r.to_string().contains("27"));
}

#[test]
fn negative_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write(
        dir.path(),
        "fam.json",
        r#"{"dimension":2,"points":[["0","0"],["1","0"],["2","0"]],"labels":[0,1,1]}"#,
    );
    let (code, r) = convind(&["antipodal-verify", "--in", &fam]);
    assert_eq!(code, 1);
    assert_eq!(r["outcome"], 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(convind(&["no-such-command"]).0, 2);
    assert_eq!(convind(&["verify-cubearc"]).0, 2);
    let (code, r) = convind(&["compute-e", "--in", "/nonexistent/file.json"]);
    assert_eq!(code, 2);
    assert!(r["error"].is_string());
}

#[test]
fn out_flag_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let csv = dir.path().join("t3.csv");
    let (code, _) = convind(&[
        "theorem3",
        "--m",
        "1..2",
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["manifest"]["output"], out.to_str().unwrap());
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("n,U,W,D,diameter,runtime_ms"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn seeded_commands_are_deterministic() {
    let run = || convind(&["refute-k22222", "--count", "10", "--seed", "5"]).1["result"].clone();
    let a = run();
    assert!(!a.is_null());
    assert_eq!(a, run());
}

#[test]
fn point_files_round_trip_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("arcs.json");
    let (code, _) = convind(&[
        "antipodal-build",
        "--m",
        "2",
        "--points",
        pts.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, r) = convind(&["antipodal-verify", "--in", pts.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
}
