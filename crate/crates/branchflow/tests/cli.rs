use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const G0: &str = r#"{"n":6,"y":[[7,"1"],[10,"1"],[11,"1"]],"trunc":40}"#;
const G0_MINUS: &str = r#"{"n":6,"y":[[7,"1"],[10,"1"],[11,"-1"]],"trunc":40}"#;
const CUSP: &str = r#"{"n":2,"y":[[3,"1"]],"trunc":30}"#;
const CUSP_TAIL: &str = r#"{"n":2,"y":[[3,"1"],[4,"1"],[5,"1"]],"trunc":20}"#;
const X_DY: &str = r#"{"A":[],"B":[[1,0,"1"]]}"#;
const JET1: &str = r#"{"x":[[1,0,"1"],[2,0,"1"],[0,2,"1"]],"y":[[0,1,"-1"]]}"#;
const JET2: &str = r#"{"x":[[1,0,"z^4"],[0,2,"1"]],"y":[[0,1,"z^8"],[2,0,"1"]]}"#;

struct Work(TempDir);

impl Work {
    fn new() -> Work {
        Work(TempDir::new().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn run(args: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branchflow")).args(args).output().unwrap()
}

fn run_str(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branchflow")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "branchflow-report/1");
    v["result"].clone()
}

#[test]
fn invariants_of_the_fixed_point_branch() {
    let w = Work::new();
    let r = report(&run(&[Path::new("invariants"), &w.file("g0.json", G0)]));
    assert_eq!(r["lambda"], 10);
    assert_eq!(r["conductor"], 30);
    assert_eq!(r["semigroup"]["generators"], serde_json::json!([6, 7]));
}

#[test]
fn contact_of_the_shear_with_the_cusp() {
    let w = Work::new();
    let r = report(&run(&[Path::new("contact"), &w.file("c.json", CUSP), &w.file("x.json", X_DY)]));
    assert_eq!(r["upsilon"]["finite"], 4);
    assert_eq!(r["contact_exponent"]["finite"], 2);
    assert_eq!(r["contact_deformation"]["finite"], 2);
    assert_eq!(r["contact_path"], 2);
    assert_eq!(r["tangency_order"]["finite"], 5);
    assert_eq!(r["shared_path"]["mults"], serde_json::json!([2, 1]));
    assert_eq!(r["noether"], 4);
}

#[test]
fn normal_form_of_the_cusp_and_its_replay() {
    let w = Work::new();
    let out = w.path("nf.json");
    let status = run(&[Path::new("--out"), &out, Path::new("normal-form"), &w.file("c.json", CUSP_TAIL)]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let r = &doc["result"];
    assert_eq!(r["output"]["y"], serde_json::json!([[3, "1"]]));
    assert_eq!(r["steps"].as_array().unwrap().len(), 2);
    // verify accepts the report as written
    assert_eq!(run(&[Path::new("verify"), &out]).status.code(), Some(0));
    // and rejects it once the output is tampered with
    let tampered = fs::read_to_string(&out).unwrap().replacen("\"1\"\n        ]\n      ]\n    },\n    \"scaling\"", "\"2\"\n        ]\n      ]\n    },\n    \"scaling\"", 1);
    assert_ne!(tampered, fs::read_to_string(&out).unwrap(), "tampering pattern did not match");
    let bad = w.file("bad.json", &tampered);
    assert_eq!(run(&[Path::new("verify"), &bad]).status.code(), Some(4));
}

#[test]
fn reports_are_deterministic() {
    let w = Work::new();
    let g0 = w.file("g0.json", G0);
    let first = run(&[Path::new("normal-form"), &g0]);
    let second = run(&[Path::new("normal-form"), &g0]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sign_of_the_modulus_is_detected() {
    let w = Work::new();
    let r = report(&run(&[Path::new("equivalence"), &w.file("a.json", G0), &w.file("b.json", G0_MINUS)]));
    assert_eq!(r["equivalent"], false);
    let r = report(&run(&[Path::new("equivalence"), &w.file("c.json", G0), &w.file("d.json", G0)]));
    assert_eq!(r["equivalent"], true);
}

#[test]
fn both_reference_jets_are_obstructed() {
    let w = Work::new();
    let g0 = w.file("g0.json", G0);
    for (name, jet) in [("j1.json", JET1), ("j2.json", JET2)] {
        let r = report(&run(&[Path::new("embeddability"), &g0, &w.file(name, jet)]));
        assert_eq!(r["non_complete"], true, "{}", name);
        assert_eq!(r["stabilizer_dimension"], 0);
        assert!(!r["system"].as_array().unwrap().is_empty());
    }
}

#[test]
fn stabilizer_of_the_fixed_point_branch() {
    let w = Work::new();
    let r = report(&run(&[Path::new("stabilizer"), &w.file("g0.json", G0)]));
    assert_eq!(r["dimension"], 0);
}

#[test]
fn input_errors_exit_with_two() {
    let w = Work::new();
    let broken = w.file("broken.json", "{\"n\": 2, \"y\": ");
    assert_eq!(run(&[Path::new("invariants"), &broken]).status.code(), Some(2));
    let unknown = w.file("unknown.json", r#"{"n":2,"y":[[3,"1"]],"trunc":20,"extra":1}"#);
    assert_eq!(run(&[Path::new("invariants"), &unknown]).status.code(), Some(2));
    let missing = w.path("missing.json");
    assert_eq!(run(&[Path::new("invariants"), &missing]).status.code(), Some(2));
    assert_eq!(run_str(&["no-such-command"]).status.code(), Some(2));
    let out = run(&[Path::new("invariants"), &broken]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].is_string());
}

#[test]
fn unrepresentable_roots_exit_with_three() {
    let w = Work::new();
    // a_lambda / a_m = 2 has no cube root in Q(zeta_12)
    let b = w.file("b.json", r#"{"n":6,"y":[[7,"1"],[10,"2"]],"trunc":40}"#);
    assert_eq!(run(&[Path::new("normal-form"), &b]).status.code(), Some(3));
    let skip = report(&run(&[Path::new("--scale"), Path::new("skip"), Path::new("normal-form"), &b]));
    assert_eq!(skip["scaling"]["mode"], "constraints");
    assert_eq!(skip["scaling"]["root_index"], 3);
    let numeric = report(&run(&[Path::new("--scale"), Path::new("numeric"), Path::new("normal-form"), &b]));
    assert_eq!(numeric["scaling"]["numeric_u"].as_array().unwrap().len(), 3);
}

#[test]
fn failed_writes_leave_no_file() {
    let w = Work::new();
    let target = w.path("no-such-dir").join("out.json");
    let out = run(&[Path::new("--out"), &target, Path::new("invariants"), &w.file("g0.json", G0)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!target.exists());
}

#[test]
fn truncation_flag_limits_the_data() {
    let w = Work::new();
    let g0 = w.file("g0.json", G0);
    // the normal form needs c + n = 36 terms
    let out = run(&[Path::new("--trunc-t"), Path::new("20"), Path::new("normal-form"), &g0]);
    assert_eq!(out.status.code(), Some(3));
}
