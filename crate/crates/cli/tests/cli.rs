use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn demo(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../demo")
        .join(name)
}

fn surf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surf"))
        .args(args)
        .output()
        .expect("surf runs")
}

fn arg(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn run_reproduces_the_worked_cover_example() {
    let (system, process) = (demo("cover-system.json"), demo("cover-process.json"));
    let out = surf(&["run", "--system", arg(&system), "--process", arg(&process)]);
    assert_eq!(out.status.code(), Some(0));
    let trace = json(&out);
    let results = trace["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    let edges = |i: usize| -> Vec<String> {
        serde_json::from_value(results[i]["E"].clone()).unwrap()
    };
    assert!(!edges(0).iter().any(|e| e.ends_with(",+)")));
    assert!(edges(1).contains(&"(1.2.3,+)".to_string()));
    assert!(edges(1).contains(&"flag(2)".to_string()));
    assert!(!edges(1).contains(&"(1.3.4,+)".to_string()));
    for twin in ["(1.2.3,+)", "(1.3.4,+)", "(1.4.5,+)"] {
        assert!(edges(2).contains(&twin.to_string()), "{twin}");
    }
}

#[test]
fn run_output_is_deterministic_and_written_to_file() {
    let dir = TempDir::new().unwrap();
    let (system, process) = (demo("cover-system.json"), demo("cover-process.json"));
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for out in [&first, &second] {
        let status = surf(&[
            "run",
            "--system",
            arg(&system),
            "--process",
            arg(&process),
            "--out",
            arg(out),
        ])
        .status;
        assert!(status.success());
    }
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    let stdout = surf(&["run", "--system", arg(&system), "--process", arg(&process)]).stdout;
    assert_eq!(stdout, fs::read(&first).unwrap());
}

#[test]
fn cover_exit_codes_follow_the_verdict() {
    let dir = TempDir::new().unwrap();
    let instance = dir.path().join("triangle.json");
    fs::write(&instance, r#"{"n": 3, "hyperedges": [[1, 2], [2, 3], [1, 3]]}"#).unwrap();
    let no = surf(&["cover", "--instance", arg(&instance), "--k", "1"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["coverable"], Value::Bool(false));
    let yes = surf(&["cover", "--instance", arg(&instance), "--k", "2", "--parallel"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(json(&yes)["witness"], serde_json::json!([1, 2]));
}

#[test]
fn cover_demo_instance_is_coverable_by_two() {
    let out = surf(&["cover", "--instance", arg(&demo("cover-instance.json")), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"format_version": 1, "kind": "system", "payload": {"#).unwrap();
    let out = surf(&["validate", arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let missing = dir.path().join("missing.json");
    assert_eq!(surf(&["validate", arg(&missing)]).status.code(), Some(2));

    let future = dir.path().join("future.json");
    fs::write(&future, r#"{"format_version": 9, "kind": "system", "payload": {}}"#).unwrap();
    assert_eq!(surf(&["validate", arg(&future)]).status.code(), Some(2));
}

#[test]
fn all_envelope_demos_validate() {
    let mut files: Vec<String> = fs::read_dir(demo(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "cover-instance.json")
        .map(|p| p.to_str().unwrap().to_string())
        .collect();
    files.sort();
    let mut args = vec!["validate"];
    args.extend(files.iter().map(String::as_str));
    let out = surf(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn inclusion_morphism_is_strong() {
    let (from, to, map) = (
        demo("cover-1-3.json"),
        demo("cover-1-4.json"),
        demo("inclusion-1-3-into-1-4.json"),
    );
    let base = ["morphism", "--from", arg(&from), "--to", arg(&to), "--map", arg(&map)];
    let out = surf(&[&base[..], &["--strong", "exhaustive"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["mono"], Value::Bool(true));
    assert_eq!(report["strong"]["strong"], Value::Bool(true));

    let sampled = surf(&[&base[..], &["--strong", "sample:50", "--seed", "3"]].concat());
    assert_eq!(sampled.status.code(), Some(0));
    assert_eq!(json(&sampled)["strong"]["states_checked"], 50);

    let unseeded = surf(&[&base[..], &["--strong", "sample:50"]].concat());
    assert_eq!(unseeded.status.code(), Some(2));
}

#[test]
fn collapsing_map_is_not_mono() {
    let dir = TempDir::new().unwrap();
    let map = dir.path().join("collapse.json");
    fs::write(
        &map,
        r#"{"format_version": 1, "kind": "morphism", "payload": {"maps": {"X": {"a": "a", "b": "a", "c": "c"}}}}"#,
    )
    .unwrap();
    let system = demo("flip-flop.json");
    let out = surf(&[
        "morphism",
        "--from",
        arg(&system),
        "--to",
        arg(&system),
        "--map",
        arg(&map),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["mono"], Value::Bool(false));
}

#[test]
fn transitions_respect_the_enumeration_cap() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("ff.dot");
    let system = demo("flip-flop.json");
    let out = surf(&["transitions", "--system", arg(&system), "--dot", arg(&dot)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["states"], 8);
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let capped = Command::new(env!("CARGO_BIN_EXE_surf"))
        .args(["transitions", "--system", arg(&system)])
        .env("SURF_MAX_ENUM", "4")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn laws_pass_for_every_kind() {
    for kind in ["set", "graph", "hypergraph", "poset", "diagram"] {
        let out = surf(&["laws", "--kind", kind, "--cases", "25", "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 8);
    }
    let bad = surf(&["laws", "--kind", "set", "--scheme", "graphs", "--seed", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}
