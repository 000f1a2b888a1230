use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ncjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncjet")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    ncjet(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let out = ncjet(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn dumped(name: &str) -> Value {
    serde_json::from_slice(&ncjet(&["--dump-fixture", name]).stdout).unwrap()
}

#[test]
fn passing_runs_exit_zero() {
    for name in ["quaternion", "two-point-universal", "matrix2-universal"] {
        assert_eq!(code(&["validate", name]), 0, "{name}");
        assert_eq!(code(&["jets", name]), 0, "{name}");
    }
    assert_eq!(code(&["spencer", "quaternion"]), 0);
    assert_eq!(code(&["connections", "quaternion", "--bimodule"]), 0);
    assert_eq!(code(&["demo"]), 0);
}

#[test]
fn corrupted_runs_exit_one() {
    let out = ncjet(&["demo", "--corrupt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("retraction"));
    assert_eq!(code(&["spencer", "quaternion", "--corrupt-sign"]), 1);
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["validate", "no-such-fixture"]), 2);
    assert_eq!(code(&["jets", "quaternion", "--order", "banana"]), 2);
    let mut bad = dumped("quaternion");
    for row in bad["omega1"]["d"].as_array_mut().unwrap() {
        let x: i64 = row[1].as_str().unwrap().parse().unwrap();
        row[1] = Value::String((2 * x).to_string());
    }
    let path = scratch("leibniz.json", &bad.to_string());
    let out = ncjet(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Leibniz"));
}

#[test]
fn malformed_input_exits_three() {
    let path = scratch("broken.json", "{\"algebra\": ");
    assert_eq!(code(&["validate", path.to_str().unwrap()]), 3);
    let mut extra = dumped("two-point-universal");
    extra["surprise"] = Value::Bool(true);
    let path = scratch("extra.json", &extra.to_string());
    assert_eq!(code(&["validate", path.to_str().unwrap()]), 3);
    let mut frac = dumped("two-point-universal");
    frac["algebra"]["unit"][0] = Value::String("1/0".into());
    let path = scratch("frac.json", &frac.to_string());
    assert_eq!(code(&["validate", path.to_str().unwrap()]), 3);
}

#[test]
fn json_output_is_deterministic() {
    for args in [&["--json", "demo"][..], &["--json", "jets", "quaternion"], &["--json", "quantize", "quaternion", "--star-gens"]] {
        assert_eq!(ncjet(args).stdout, ncjet(args).stdout, "{args:?}");
    }
}

#[test]
fn dumped_fixtures_round_trip() {
    for name in ["quaternion", "two-point-universal", "matrix2-universal"] {
        let path = scratch(&format!("{name}.json"), &dumped(name).to_string());
        let file = path.to_str().unwrap();
        for cmd in [["--json", "jets"], ["--json", "spencer"]] {
            let from_name = json(&[cmd[0], cmd[1], name]);
            let from_file = json(&[cmd[0], cmd[1], file]);
            assert_eq!(from_name, from_file, "{name} {cmd:?}");
        }
    }
}

#[test]
fn quantizes_left_multiplication_by_k() {
    let op = r#"{"source":"A","target":"A","matrix":[["0","0","0","-1"],["0","0","-1","0"],["0","1","0","0"],["1","0","0","0"]]}"#;
    let path = scratch("lk.json", op);
    let v = json(&["--json", "quantize", "quaternion", "--op", path.to_str().unwrap()]);
    assert_eq!(v["top"], 2);
    assert_eq!(v["operator"]["order"], 2);
    assert_eq!(v["operator"]["reconstructs"], true);
    let comps = v["operator"]["components"].as_array().unwrap();
    let entry = |k: usize, r: usize, c: usize| comps[k]["component"][r][c].as_str().unwrap().to_string();
    // degree 0 is right multiplication by k
    assert_eq!(entry(0, 3, 0), "1");
    assert_eq!(entry(0, 2, 1), "-1");
    assert_eq!(entry(2, 0, 3), "-4");
    let path = scratch("lk_bad.json", &op.replace("\"A\",\"matrix\"", "\"B\",\"matrix\""));
    assert_eq!(code(&["quantize", "quaternion", "--op", path.to_str().unwrap()]), 2);
}
