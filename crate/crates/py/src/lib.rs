//! Python module `ncdr`. Build with `--features extension-module` for a
//! loadable extension; reports come back as JSON text.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ncdr_cli::{RunConfig, SuiteKind};
use ncdr_core::error::Error;
use ncdr_core::forms::Calculus;
use ncdr_core::homology::{hh_kernel_iota, hochschild};
use ncdr_core::spec::parse_algebra;

fn py_err(e: Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// `dim HH_n` for `n <= n_max`, from the complex of forms and from
/// the kernel of iota on DR, for an algebra spec given as JSON text.
#[pyfunction]
#[pyo3(signature = (spec, n_max = 3))]
pub fn hh_dims(spec: &str, n_max: usize) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let s = parse_algebra(spec).map_err(py_err)?;
    let calc = Calculus::new(&s.algebra);
    let omega = hochschild(&calc, n_max).dims;
    let kernel = (0..=n_max).map(|n| hh_kernel_iota(&calc, n).dim).collect();
    Ok((omega, kernel))
}

/// Run one CLI command on a spec file; returns `(exit_code, report_json)`.
/// `command` is `hh`, `hp`, `hc`, `deform mc`, `gm` or `verify <suite>`.
#[pyfunction]
#[pyo3(signature = (command, spec_path, n_max = None, window = None, cap = None, dim = None, order = None, seed = 0))]
#[allow(clippy::too_many_arguments)]
pub fn run(
    command: &str,
    spec_path: &str,
    n_max: Option<usize>,
    window: Option<(i64, i64)>,
    cap: Option<usize>,
    dim: Option<usize>,
    order: Option<usize>,
    seed: u64,
) -> PyResult<(i32, String)> {
    let cfg = RunConfig { command: command.into(), spec: spec_path.into(), n_max, window, cap, dim, order, seed };
    let r = match command.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["hh"] => ncdr_cli::cmd_hh(&cfg),
        ["hp"] => ncdr_cli::cmd_hp(&cfg),
        ["hc"] => ncdr_cli::cmd_hc(&cfg),
        ["gm"] => ncdr_cli::cmd_gm(&cfg),
        ["deform", "mc"] => ncdr_cli::cmd_deform_mc(&cfg),
        ["verify", s] => match SuiteKind::parse(s) {
            Some(k) => ncdr_cli::cmd_verify(k, &cfg),
            None => return Err(PyValueError::new_err(format!("unknown suite `{s}`"))),
        },
        _ => return Err(PyValueError::new_err(format!("unknown command `{command}`"))),
    }
    .map_err(py_err)?;
    Ok((r.status.exit_code(), r.to_json()))
}

#[pymodule]
pub fn ncdr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hh_dims, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
