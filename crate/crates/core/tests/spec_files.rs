use std::path::PathBuf;

use fieldquanta_core::catalog::{builtin, load, parse_json, save, to_json};
use fieldquanta_core::groups::so_basis;
use fieldquanta_core::kernel::TolerancePolicy;
use fieldquanta_core::Error;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fieldquanta-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn save_then_load_is_identity() {
    for name in ["complex-kg", "standard-model", "kg-internal(3)"] {
        let spec = builtin(name).unwrap();
        let path = scratch(&format!("{}.json", name.replace(['(', ')'], "_")));
        save(&spec, &path, &tol()).unwrap();
        assert_eq!(load(&path, &tol()).unwrap(), spec, "{name}");
    }
}

#[test]
fn unclosed_generators_name_the_pair() {
    let mut spec = builtin("kg-internal(3)").unwrap();
    // drop L₃ = [L₁, L₂]
    spec.fields[0].internal.generators = so_basis(3)[..2].to_vec();
    spec.symmetry_factors[0].dim = 2;
    spec.symmetry_factors[0].action.insert("phi".into(), vec![0, 1]);
    let path = scratch("unclosed.json");
    std::fs::write(&path, to_json(&spec).unwrap()).unwrap();
    match load(&path, &tol()) {
        Err(Error::Validation(v)) => {
            assert!(v.iter().any(|m| m.contains("(0, 1)")), "{v:?}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn every_violation_is_listed() {
    let mut spec = builtin("complex-kg").unwrap();
    spec.fields[0].copies = 0;
    spec.fields[0].statistics = fieldquanta_core::catalog::Statistics::Fermi;
    spec.symmetry_factors[0].action.insert("ghost".into(), vec![0]);
    let err = spec.validate(&tol()).unwrap_err();
    let Error::Validation(v) = err else { panic!("{err:?}") };
    assert_eq!(v.len(), 3, "{v:?}");
}

#[test]
fn generator_size_mismatch_is_a_parse_error() {
    let text = to_json(&builtin("complex-kg").unwrap()).unwrap();
    let broken = text.replacen("\"dim\": 2", "\"dim\": 4", 1);
    assert!(matches!(parse_json(&broken), Err(Error::Parse(_))));
}

#[test]
fn malformed_json_reports_position() {
    let Err(Error::Parse(msg)) = parse_json("{\"schema\": \"fieldquanta-spec/1\",\n \"name\": }") else {
        panic!("expected a parse error");
    };
    assert!(msg.starts_with("line 2"), "{msg}");
}

#[test]
fn wrong_schema_is_rejected() {
    let text = to_json(&builtin("real-kg").unwrap()).unwrap().replace("fieldquanta-spec/1", "fieldquanta-spec/9");
    assert!(matches!(parse_json(&text), Err(Error::Parse(_))));
}
