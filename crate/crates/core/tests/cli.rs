use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ade-vertex")).args(args).output().expect("binary runs")
}

fn payload(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    v["payload"].clone()
}

#[test]
fn verify_a2_passes() {
    let out = run(&["verify", "--algebra", "A2", "--window", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["passed"], Value::Bool(true));
    assert_eq!(p["algebra"], "A2");
}

#[test]
fn payload_is_deterministic() {
    let a = run(&["decompose", "--algebra", "E6"]);
    let b = run(&["decompose", "--algebra", "E6"]);
    assert_eq!(payload(&a), payload(&b));
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn tsv_has_header_and_rows() {
    let out = run(&["characters", "--algebra", "A4", "--order", "6", "--emit", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("affine\tlattice"));
    assert!(lines[1].contains("4,16,40,96,204,400,760"));
    assert!(lines[1].ends_with("PASS"));
}

#[test]
fn example_d4_lists_sign_deviations() {
    let out = run(&["example-d4", "--signs", "+,-,+,+"]);
    assert_eq!(out.status.code(), Some(0));
    let roots = payload(&out)["sign_deviation_roots"].clone();
    assert_eq!(roots, serde_json::json!(["a1+2a2+a3+a4", "a1+a2+a3+a4", "a2"]));
}

#[test]
fn output_file_is_written() {
    let dir = std::env::temp_dir().join(format!("ade-vertex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d4.json");
    let out = run(&["decompose", "--algebra", "D4", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["payload"]["decomposition"]["submodules"].as_array().map(|a| a.len()), Some(8));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["decompose", "--algebra", "Q9"],
        vec!["example-d4", "--signs", "+,+"],
        vec!["verify"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unsupported_orientation_is_rejected() {
    let dir = std::env::temp_dir().join(format!("ade-vertex-orient-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("arrows.txt");
    std::fs::write(&path, "2 1\n2 3\n2 4\n").unwrap();
    let out = run(&["decompose", "--algebra", "D4", "--orientation", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
