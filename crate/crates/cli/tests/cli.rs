use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const T2: &str = "[[0,0,0],[1,0,0],[0,1,0],[1,1,2]]";
const SQUARE: &str = "[[0,0],[1,0],[0,1],[1,1]]";

fn polynorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polynorm"))
        .args(args)
        .env_remove("POLYNORM_THREADS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reeve_tetrahedron() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t2.json", T2);
    let v = json(&polynorm(&["analyze", f.to_str().unwrap()]));
    assert_eq!(v["n"], 3);
    assert_eq!(v["d"], 1);
    assert_eq!(v["codegree"], 2);
    assert_eq!(v["corollary_bound"], 2);
    assert_eq!(v["autoregularity"], 1);
    assert_eq!(v["normality"]["verdict"], "non-normal");
    assert_eq!(
        v["normality"]["witness"]["point"],
        serde_json::json!([1, 1, 1])
    );
}

#[test]
fn global_cap_is_accepted_before_and_after_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.json", SQUARE);
    let before = json(&polynorm(&["--cap", "5", "analyze", f.to_str().unwrap()]));
    let after = json(&polynorm(&["analyze", f.to_str().unwrap(), "--cap", "5"]));
    assert_eq!(before["normality"]["cap_used"], 5);
    assert_eq!(before, after);
}

#[test]
fn text_format_renders_tables() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t2.json", T2);
    let out = polynorm(&[
        "--format",
        "text",
        "cohomology",
        f.to_str().unwrap(),
        "--k-min",
        "-2",
        "--k-max",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(3)
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(
        rows,
        [
            vec!["-2", "0", "0", "0", "1"],
            vec!["-1", "0", "0", "0", "0"],
            vec!["0", "1", "0", "0", "0"],
            vec!["1", "4", "0", "0", "0"]
        ]
    );
}

#[test]
fn cohomology_json_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.json", SQUARE);
    let v = json(&polynorm(&[
        "cohomology",
        f.to_str().unwrap(),
        "--k-min",
        "-2",
        "--k-max",
        "2",
    ]));
    let h: Vec<Value> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["h"].clone())
        .collect();
    assert_eq!(
        h,
        [
            serde_json::json!([0, 0, 1]),
            serde_json::json!([0, 0, 0]),
            serde_json::json!([1, 0, 0]),
            serde_json::json!([4, 0, 0]),
            serde_json::json!([9, 0, 0])
        ]
    );
}

#[test]
fn np_probe_reports_four_fields() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.json", SQUARE);
    let v = json(&polynorm(&[
        "np-probe",
        f.to_str().unwrap(),
        "--ell",
        "1",
        "--cap",
        "4",
    ]));
    assert_eq!(
        v,
        serde_json::json!({"ell": 1, "cap": 4, "verdict": "connected-up-to-cap", "witness_fiber": null})
    );
}

#[test]
fn corpus_is_reproducible() {
    let args = [
        "corpus", "--seed", "1", "--dims", "2", "--count", "5", "--bound", "3",
    ];
    let a = polynorm(&args);
    let b = polynorm(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a).as_array().unwrap().len(), 5);
}

#[test]
fn verify_passes_on_the_unit_square() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.json", SQUARE);
    let v = json(&polynorm(&[
        "verify",
        f.to_str().unwrap(),
        "--extra-levels",
        "1",
    ]));
    assert_eq!(v["corollary"]["violations"], serde_json::json!([]));
    assert_eq!(v["reciprocity"], true);
}

#[test]
fn empty_corpus_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "spec.json",
        r#"{"seed": 3, "dims": [2], "coord_bound": 4, "count_per_dim": 0, "vertex_candidates": 6}"#,
    );
    let v = json(&polynorm(&["verify-corpus", f.to_str().unwrap()]));
    assert_eq!(v["summary"]["polytopes"], 0);
    assert_eq!(v["entries"], serde_json::json!([]));
}

#[test]
fn invalid_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write(dir.path(), "flat.json", "[[0,0],[1,1],[2,2]]");
    let junk = write(dir.path(), "junk.json", "not json");
    let bad_spec = write(
        dir.path(),
        "spec.json",
        r#"{"seed": 3, "dims": [7], "coord_bound": 4, "count_per_dim": 1, "vertex_candidates": 6}"#,
    );
    let missing = dir.path().join("missing.json");
    for args in [
        vec!["analyze", flat.to_str().unwrap()],
        vec!["analyze", junk.to_str().unwrap()],
        vec!["analyze", missing.to_str().unwrap()],
        vec!["verify-corpus", bad_spec.to_str().unwrap()],
        vec![
            "np-probe",
            flat.to_str().unwrap(),
            "--ell",
            "0",
            "--cap",
            "2",
        ],
        vec!["no-such-command"],
    ] {
        assert_eq!(polynorm(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn thread_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.json", SQUARE);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_polynorm"))
            .args(["analyze", f.to_str().unwrap()])
            .env("POLYNORM_THREADS", threads)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("2"), Some(0));
    assert_eq!(run("0"), Some(0));
    assert_eq!(run("many"), Some(1));
}
