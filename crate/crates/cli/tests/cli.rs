use hyperpack_core::complex::{DOUBLE4_JSON, FAN6_JSON};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

const SINGLE_TET: &str = r#"{
  "version": 1,
  "vertex_count": 4,
  "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]],
  "tets": [{"vertices": [0, 1, 2, 3], "edge_refs": [0, 1, 2, 3, 4, 5]}],
  "radii": [0.7, 0.9, 1.1, 1.3]
}"#;

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Self(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn hyperpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperpack"))
        .args(args)
        .output()
        .unwrap()
}

fn run_on(doc: &Path, cmd: &str, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--triangulation", doc.to_str().unwrap()];
    args.extend_from_slice(extra);
    hyperpack(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn check_regular_double4_is_admissible() {
    let s = Scratch::new();
    let out = run_on(&s.file("d.json", DOUBLE4_JSON), "check", &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["always_degenerate"], false);
}

#[test]
fn curvature_of_regular_double4() {
    let s = Scratch::new();
    let v = json(&run_on(&s.file("d.json", DOUBLE4_JSON), "curvature", &[]));
    for k in v["edge_curvature"].as_array().unwrap() {
        assert!((k.as_f64().unwrap() - 4.370_801_794).abs() < 1e-5);
    }
    for k in v["vertex_curvature"].as_array().unwrap() {
        assert!((k.as_f64().unwrap() - 13.112_405_382).abs() < 1e-5);
    }
}

#[test]
fn s_pattern_weights_are_always_degenerate() {
    let s = Scratch::new();
    let doc = s.file("t.json", SINGLE_TET);
    let half = std::f64::consts::FRAC_PI_2;
    let w = s.file("w.json", &format!("[0, {half}, {half}, {half}, {half}, 0]"));
    let out = run_on(&doc, "check", &["--weights", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["always_degenerate"], true);
    assert_eq!(v["admissible"], false);
    assert_eq!(v["tets"][0]["status"], "always_degenerate");
}

#[test]
fn input_problems_exit_with_two() {
    let s = Scratch::new();
    let bad = s.file("bad.json", "{ not json");
    assert_eq!(run_on(&bad, "validate", &[]).status.code(), Some(2));
    assert_eq!(
        run_on(&s.path("missing.json"), "validate", &[])
            .status
            .code(),
        Some(2)
    );
    let mut doc: Value = serde_json::from_str(DOUBLE4_JSON).unwrap();
    doc.as_object_mut().unwrap().remove("radii").unwrap();
    let no_radii = s.file("n.json", &doc.to_string());
    let out = run_on(&no_radii, "curvature", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radii"));
    let short = s.file("r.json", "[1.0, 1.0]");
    let doc = s.file("d.json", DOUBLE4_JSON);
    assert_eq!(
        run_on(&doc, "curvature", &["--radii", short.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let wrong_slot = DOUBLE4_JSON.replacen(
        "\"edge_refs\": [0, 1, 2, 3, 4, 5]",
        "\"edge_refs\": [1, 0, 2, 3, 4, 5]",
        1,
    );
    let out = run_on(&s.file("slot.json", &wrong_slot), "validate", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tet 0"));
    assert_eq!(
        hyperpack(&["verify", "--samples", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn inadmissible_state_is_a_computation_failure() {
    let s = Scratch::new();
    let doc = s.file("d.json", DOUBLE4_JSON);
    let w = s.file("w.json", "[1.5, 1.5, 1.5, 1.5, 1.5, 1.5]");
    let r = s.file("r.json", "[0.05, 0.05, 0.05, 0.05]");
    let args = [
        "--weights",
        w.to_str().unwrap(),
        "--radii",
        r.to_str().unwrap(),
    ];
    assert_eq!(run_on(&doc, "curvature", &args).status.code(), Some(1));
    let out = run_on(&doc, "lengths", &args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["admissible"], false);
}

#[test]
fn solve_recovers_and_reports_failure_when_capped() {
    let s = Scratch::new();
    let doc = s.file("d.json", DOUBLE4_JSON);
    let goal = s.file("goal.json", "[1.2, 0.9, 1.1, 1.0]");
    let k = json(&run_on(
        &doc,
        "curvature",
        &["--radii", goal.to_str().unwrap()],
    ));
    let target = s.file(
        "k.json",
        &format!("{{\"target\": {}}}", k["vertex_curvature"]),
    );
    let out = run_on(&doc, "solve", &["--target", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["termination"], "converged");
    for (r, g) in v["radii"]
        .as_array()
        .unwrap()
        .iter()
        .zip([1.2, 0.9, 1.1, 1.0])
    {
        assert!((r.as_f64().unwrap() - g).abs() < 1e-8);
    }
    let capped = run_on(
        &doc,
        "solve",
        &[
            "--target",
            target.to_str().unwrap(),
            "--max-iterations",
            "1",
        ],
    );
    assert_eq!(capped.status.code(), Some(1));
    assert_eq!(json(&capped)["termination"], "max_iterations");
}

#[test]
fn certify_modes_on_fan6() {
    let s = Scratch::new();
    let doc = s.file("f.json", FAN6_JSON);
    for mode in ["scalar", "ricci"] {
        let out = run_on(&doc, "certify", &["--mode", mode]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["mode"], mode);
        assert!(v["lambda_max"].as_f64().unwrap() < 0.0);
    }
}

#[test]
fn csv_and_out_file() {
    let s = Scratch::new();
    let doc = s.file("d.json", DOUBLE4_JSON);
    let target = s.path("out.csv");
    let out = run_on(
        &doc,
        "curvature",
        &["--csv", "--out", target.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let mut reader = csv::Reader::from_path(&target).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["kind", "index", "curvature"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    let k: f64 = rows[0][2].parse().unwrap();
    assert!((k - 4.370_801_794).abs() < 1e-5);
}

#[test]
fn volume_and_sample_run() {
    let s = Scratch::new();
    let doc = s.file("d.json", DOUBLE4_JSON);
    let r = s.file("r.json", "[1.2, 0.9, 1.1, 1.0]");
    let reference = s.file("ref.json", "{\"radii\": [1, 1, 1, 1]}");
    let v = json(&run_on(
        &doc,
        "volume",
        &[
            "--radii",
            r.to_str().unwrap(),
            "--reference",
            reference.to_str().unwrap(),
        ],
    ));
    assert_eq!(v["converged"], true);
    let same = json(&run_on(
        &doc,
        "volume",
        &["--reference", reference.to_str().unwrap()],
    ));
    assert_eq!(same["total"].as_f64().unwrap(), 0.0);
    let w = s.file("w.json", "[1.5, 1.5, 1.5, 0.2, 0.2, 0.2]");
    let out = run_on(
        &doc,
        "sample",
        &[
            "--weights",
            w.to_str().unwrap(),
            "--apex",
            "0",
            "--samples",
            "50",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["draws"], 50);
    assert_eq!(
        run_on(&doc, "sample", &["--apex", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run_on(&doc, "sample", &["--apex", "0", "--tet", "9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let a = hyperpack(&["verify", "--seed", "3", "--samples", "300"]);
    let b = hyperpack(&["verify", "--seed", "3", "--samples", "300"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stdout)
    );
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);
}
