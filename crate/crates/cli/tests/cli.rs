use std::path::PathBuf;
use std::process::{Command, Output};

use fieldquanta_core::catalog::{builtin, to_json};
use fieldquanta_core::kernel::RealMatrix;
use fieldquanta_core::pipeline::from_json;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fieldquanta"));
    c.env_remove("FIELDQUANTA_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fieldquanta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn complex_kg_text_report() {
    let o = run(&["classify", "--builtin", "complex-kg"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("secretly complex"));
    assert!(s.contains("particle 1 + antiparticle 1"));
    assert!(s.contains("CPT"));
    assert!(s.contains("antiparticles   yes"));
}

#[test]
fn schroedinger_has_no_antiparticles() {
    let o = run(&["classify", "--builtin", "schroedinger", "--modes", "64,2pi"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("antiparticles   no (no complex-linear parity-time symmetry)"), "{s}");
}

#[test]
fn standard_model_json_parses() {
    let o = run(&["classify", "--builtin", "standard-model", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = from_json(&stdout(&o)).unwrap();
    assert_eq!(r.breaking.unwrap().residual_dim, 1);
    assert_eq!(r.provenance.seed, 42);
}

#[test]
fn seed_comes_from_the_environment() {
    let o = bin()
        .args(["classify", "--builtin", "real-kg", "--format", "json"])
        .env("FIELDQUANTA_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(from_json(&stdout(&o)).unwrap().provenance.seed, 7);
}

#[test]
fn out_writes_a_file() {
    let path = scratch("report.json");
    let o = run(&["classify", "--builtin", "dirac", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r = from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.theory, "dirac");
}

#[test]
fn export_then_classify_spec() {
    let path = scratch("weyl.json");
    let o = run(&["export", "--builtin", "weyl-l", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["validate", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let a = run(&["classify", "--spec", path.to_str().unwrap(), "--format", "json"]);
    let b = run(&["classify", "--builtin", "weyl-l", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reducible_field_exits_with_2() {
    let mut spec = builtin("complex-kg").unwrap();
    // two independent real scalars with a zero generator
    spec.fields[0].internal.generators = vec![RealMatrix::zeros(2, 2)];
    spec.fields[0].discrete_candidates.truncate(1);
    let path = scratch("reducible.json");
    std::fs::write(&path, to_json(&spec).unwrap()).unwrap();
    let o = run(&["classify", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not real-irreducible"));
}

#[test]
fn invalid_spec_lists_violations() {
    let path = scratch("invalid.json");
    let text = to_json(&builtin("complex-kg").unwrap()).unwrap().replace("\"copies\": 1", "\"copies\": 0");
    std::fs::write(&path, text).unwrap();
    let o = run(&["validate", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("copies must be at least 1"));
}

#[test]
fn bad_input_exits_with_2() {
    assert_eq!(run(&["classify", "--builtin", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--builtin", "complex-kg", "--modes", "60,1"]).status.code(), Some(2));
    assert_eq!(run(&["classify"]).status.code(), Some(2));
    assert_eq!(run(&["demo", "nope"]).status.code(), Some(2));
}

#[test]
fn demos_run() {
    for d in ["so2-vs-so3", "higgs", "goldstone"] {
        let o = run(&["demo", d]);
        assert_eq!(o.status.code(), Some(0), "{d}");
    }
    assert!(stdout(&run(&["demo", "higgs"])).contains("cosine similarity with (u(1) − q σz): 1.000000000000"));
}
