use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psu-saxl")).args(args).output().unwrap()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let out = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    let o = run(&all);
    let code = o.status.code().unwrap();
    let json = std::fs::read(&out)
        .map(|b| serde_json::from_slice(&b).unwrap())
        .unwrap_or(Value::Null);
    (code, json)
}

#[test]
fn census_at_seven() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_to(dir.path(), "c.json", &["census", "--q", "7"]);
    assert_eq!(code, 0);
    let x: Vec<u64> = serde_json::from_value(r["census"]["x"].clone()).unwrap();
    assert_eq!(x, [7, 7, 7, 21, 2, 20, 34, 0]);
    assert_eq!(r["census"]["gamma_r"], 5040);
    assert_eq!(r["omega"], 16856);
    assert!(r["flags"].as_array().unwrap().is_empty());
    assert!(dir.path().join("c.txt").exists());
}

#[test]
fn verify_bg_at_nine() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_to(dir.path(), "bg.json", &["verify-bg", "--q", "9"]);
    assert_eq!(code, 0);
    assert_eq!(r["verify_bg"]["verified"], true);
    assert!(r.get("census").is_none());
}

#[test]
fn invalid_configurations_exit_two() {
    for args in [
        vec!["census", "--q", "8"],
        vec!["census", "--q", "5"],
        vec!["census", "--q", "15"],
        vec!["census", "--q", "17"],
        vec!["census", "--p", "2", "--m", "3"],
        vec!["census", "--p", "9", "--m", "1"],
        vec!["census"],
        vec!["census", "--q", "9", "--p", "3"],
        vec!["construct", "--q", "7", "--gram", "identity"],
        vec!["lab5", "--q", "7", "--trials", "0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cap_is_configurable() {
    assert_eq!(run(&["census", "--q", "9", "--q-cap", "7"]).status.code(), Some(2));
    let o = run(&["census", "--q", "9", "--q-cap", "9", "--out", "/nonexistent/dir/r.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("omega.bin");
    let cache = cache.to_str().unwrap();
    let args = ["all", "--q", "7", "--max-reps", "6", "--trials", "30", "--seed", "5", "--cache", cache];
    let (c1, _) = run_to(dir.path(), "a.json", &args);
    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "1"]);
    let (c2, _) = run_to(dir.path(), "b.json", &jobs);
    assert_eq!((c1, c2), (0, 0));
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn flags_are_not_failures() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_to(dir.path(), "l.json", &["lab5", "--q", "7", "--max-reps", "3", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(r["assertions"].as_array().unwrap().iter().all(|a| a["passed"] == true));
    let flags: Vec<&str> = r["flags"].as_array().unwrap().iter().map(|f| f["tag"].as_str().unwrap()).collect();
    assert!(flags.contains(&"lambda12-third"), "{flags:?}");
}
