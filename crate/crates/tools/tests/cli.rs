use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nambu(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nambu"))
        .args(args)
        .env("NAMBU_CACHE_DIR", cache)
        .output()
        .expect("runs")
}

fn succeeds(cache: &Path, args: &[&str]) {
    let out = nambu(cache, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty(), "--out leaves stdout empty");
}

fn json(cache: &Path, args: &[&str]) -> Value {
    let out = nambu(cache, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn orient_gamma3() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(
        dir.path(),
        &["orient", "--cocycle", "gamma3", "--sinks", "2"],
    );
    assert_eq!(v["summary"]["directed_graphs"], 3);
    assert_eq!(
        v["summary"]["multiplicities"],
        serde_json::json!([8, 24, 24])
    );
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
    assert_eq!(
        std::fs::read_dir(dir.path().join("manifests"))
            .unwrap()
            .count(),
        1
    );
}

#[test]
fn unique_vanishing_hamiltonian_at_d4() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(
        dir.path(),
        &[
            "relations",
            "--graphs",
            "hams_d4",
            "--dim",
            "4",
            "--report",
            "vanishing",
        ],
    );
    assert_eq!(v["zero_by_sign"].as_array().unwrap().len(), 0);
    assert_eq!(v["nonzero_vanishing"].as_array().unwrap().len(), 1);
    assert_eq!(v["nonvanishing"], 20);
}

#[test]
fn output_files_get_manifests_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("expansion.json");
    let o = out.to_str().unwrap();
    succeeds(
        dir.path(),
        &[
            "microexpand",
            "--graph",
            "sunflower",
            "--dim",
            "3",
            "--out",
            o,
        ],
    );
    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("expansion.json.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["inputs"][0]["name"], "sunflower");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["summary"]["distinct_graphs"], 41);
    let again = dir.path().join("again.json");
    succeeds(
        dir.path(),
        &[
            "microexpand",
            "--graph",
            "sunflower",
            "--dim",
            "3",
            "--out",
            again.to_str().unwrap(),
        ],
    );
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
    let emb = json(dir.path(), &["embed", "--graph", o, "--check"]);
    assert_eq!(emb["summary"]["vanishing_preserved"], true);
}

#[test]
fn trivialize_and_symmetry() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(
        dir.path(),
        &[
            "trivialize",
            "--cocycle",
            "gamma3",
            "--dim",
            "2",
            "--ansatz",
            "sunflower",
        ],
    );
    assert_eq!(v["status"], "solved");
    assert_eq!(v["residual_zero"], true);
    let v = json(
        dir.path(),
        &[
            "trivialize",
            "--cocycle",
            "gamma3",
            "--dim",
            "3",
            "--ansatz",
            "admissible",
        ],
    );
    assert_eq!(v["status"], "unsolvable");
    let v = json(
        dir.path(),
        &[
            "symmetry",
            "--cocycle",
            "gamma3",
            "--dim",
            "3",
            "--transform",
            "flip:1",
        ],
    );
    assert_eq!(
        (v["bivector_flips"].clone(), v["flow_invariant"].clone()),
        (Value::Bool(true), Value::Bool(true))
    );
}

#[test]
fn large_runs_checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "trivialize",
        "--cocycle",
        "gamma3",
        "--dim",
        "3",
        "--ansatz",
        "micro-1-3-d3",
        "--large",
    ];
    let first = json(dir.path(), &args);
    let checkpoints = std::fs::read_dir(dir.path().join("trivialize"))
        .unwrap()
        .count();
    assert!(checkpoints > 200);
    let second = json(dir.path(), &args);
    assert_eq!(first["coefficients"], second["coefficients"]);
    assert_eq!(second["spot_checks"]["all_zero"], true);
    assert!(!nambu(
        dir.path(),
        &[
            "trivialize",
            "--cocycle",
            "gamma3",
            "--dim",
            "4",
            "--ansatz",
            "sunflower"
        ]
    )
    .status
    .success());
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let out = nambu(dir.path(), &["orient", "--cocycle", "no-such-file.json"]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).expect("json error");
    assert!(err["error"].as_str().unwrap().contains("no-such-file"));
    let out = nambu(
        dir.path(),
        &[
            "symmetry",
            "--cocycle",
            "gamma3",
            "--dim",
            "3",
            "--transform",
            "swap:1,2",
        ],
    );
    assert!(!out.status.success());
}

#[test]
fn fixtures_2d_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["fixtures", "--suite", "2d"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}
