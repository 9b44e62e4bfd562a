//! Python bindings: every function takes a job spec as a JSON string and
//! returns the same JSON document the `hh` binary prints.

use fermat_hh::cli::*;
use fermat_hh::group::{Group, DEFAULT_CAP};
use fermat_hh::verify::VerifyLevel;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

fn err(e: CliError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn run(spec: &str, command: &str, f: impl FnOnce(&JobSpec, &Group) -> Result<Value, CliError>) -> PyResult<String> {
    let spec = JobSpec::from_json(spec).map_err(err)?;
    let g = spec.group(DEFAULT_CAP).map_err(err)?;
    let v = f(&spec, &g).map_err(err)?;
    Ok(serde_json::to_string(&envelope(&spec, command, v)).expect("JSON output"))
}

#[pyfunction]
fn closure(spec: &str) -> PyResult<String> {
    run(spec, "closure", |_, g| Ok(cmd_closure(g)))
}

#[pyfunction]
fn sectors(spec: &str) -> PyResult<String> {
    run(spec, "sectors", |_, g| Ok(cmd_sectors(g)))
}

#[pyfunction]
fn product(spec: &str, left: &str, right: &str) -> PyResult<String> {
    run(spec, "product", |_, g| cmd_product(g, left, right))
}

#[pyfunction]
fn table(spec: &str) -> PyResult<String> {
    run(spec, "table", |_, g| Ok(cmd_table(g)))
}

#[pyfunction]
fn invariants(spec: &str) -> PyResult<String> {
    run(spec, "invariants", |_, g| cmd_invariants(g))
}

#[pyfunction]
fn gradings(spec: &str) -> PyResult<String> {
    run(spec, "gradings", |_, g| Ok(cmd_gradings(g)))
}

/// `level` is "golden" or "full"; defaults to the spec's option.
#[pyfunction]
#[pyo3(signature = (spec, level=None))]
fn verify(spec: &str, level: Option<&str>) -> PyResult<String> {
    let level = level
        .map(|l| serde_json::from_value::<VerifyLevel>(Value::String(l.into())).map_err(|e| PyValueError::new_err(e.to_string())))
        .transpose()?;
    run(spec, "verify", |s, g| Ok(cmd_verify(g, level.unwrap_or(s.options.verify_level)).0))
}

#[pymodule]
fn fermat_hh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    for f in [
        wrap_pyfunction!(closure, m)?,
        wrap_pyfunction!(sectors, m)?,
        wrap_pyfunction!(product, m)?,
        wrap_pyfunction!(table, m)?,
        wrap_pyfunction!(invariants, m)?,
        wrap_pyfunction!(gradings, m)?,
        wrap_pyfunction!(verify, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}
