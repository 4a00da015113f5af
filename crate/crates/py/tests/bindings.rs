use pyo3::prelude::*;
use pyo3::types::PyModule;

const DUAL: &str = r#"{"generators": ["e"], "relations": ["e*e"], "degree_cap": 3}"#;

#[test]
fn hh_dims_both_ways() {
    let (omega, kernel) = ncdr::hh_dims(DUAL, 3).unwrap();
    assert_eq!(omega, vec![2, 1, 1, 1]);
    assert_eq!(kernel, omega);
    assert!(ncdr::hh_dims("{", 3).is_err());
}

#[test]
fn run_dispatches_commands() {
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/specs/dual_numbers.json");
    let (code, text) = ncdr::run("verify identities", spec, Some(2), None, None, None, None, 0).unwrap();
    assert_eq!(code, 0);
    assert!(text.contains("\"status\": \"ok\""));
    assert!(ncdr::run("frobnicate", spec, None, None, None, None, None, 0).is_err());
}

#[test]
fn module_imports_in_an_embedded_interpreter() {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "ncdr").unwrap();
        ncdr::ncdr(&m).unwrap();
        let dims: (Vec<usize>, Vec<usize>) = m.getattr("hh_dims").unwrap().call1((DUAL, 2)).unwrap().extract().unwrap();
        assert_eq!(dims.0, vec![2, 1, 1]);
        let err = m.getattr("hh_dims").unwrap().call1(("{}", 2)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
