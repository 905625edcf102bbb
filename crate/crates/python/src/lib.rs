//! Python bindings: a `Graph` class wrapping validation, planning and the
//! native and AutomationML formats.

use popan::{aml, fixtures, native, planner, Mode, PopanGraph, Severity, ValidationReport};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(
    popan,
    PopanError,
    PyException,
    "Raised when a model cannot be read, written or planned."
);

fn domain_err(err: impl std::fmt::Display) -> PyErr {
    PopanError::new_err(err.to_string())
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    mode.parse().map_err(|_| {
        PyValueError::new_err(format!(
            "mode must be \"assembly\" or \"disassembly\", got {mode:?}"
        ))
    })
}

fn report_dict<'py>(py: Python<'py>, report: &ValidationReport) -> PyResult<Bound<'py, PyDict>> {
    let findings = PyList::empty(py);
    for f in &report.findings {
        let item = PyDict::new(py);
        let severity = match f.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        item.set_item("severity", severity)?;
        item.set_item("code", &f.code)?;
        item.set_item("subject_id", &f.subject_id)?;
        item.set_item("message", &f.message)?;
        findings.append(item)?;
    }
    let dict = PyDict::new(py);
    dict.set_item("ok", report.ok)?;
    dict.set_item("findings", findings)?;
    Ok(dict)
}

/// A product-oriented asset network.
#[pyclass(name = "Graph", module = "popan", frozen)]
struct PyGraph {
    inner: PopanGraph,
}

#[pymethods]
impl PyGraph {
    /// Parse the native JSON model format.
    #[staticmethod]
    fn from_native(text: &str) -> PyResult<Self> {
        native::graph_from_native(text)
            .map(|inner| Self { inner })
            .map_err(domain_err)
    }

    /// Parse a CAEX 2.15 document.
    #[staticmethod]
    fn from_aml(text: &str) -> PyResult<Self> {
        aml::graph_from_aml(text)
            .map(|inner| Self { inner })
            .map_err(domain_err)
    }

    /// One of the built-in example networks.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::by_name(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown fixture {name:?}")))
    }

    #[staticmethod]
    fn fixture_names() -> Vec<&'static str> {
        fixtures::NAMES.to_vec()
    }

    fn to_native(&self) -> String {
        native::graph_to_native(&self.inner)
    }

    fn to_aml(&self) -> PyResult<String> {
        aml::graph_to_aml(&self.inner).map_err(domain_err)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// `{"ok": bool, "findings": [{"severity", "code", "subject_id", "message"}]}`
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &popan::validate(&self.inner))
    }

    /// Ordered `(process, product, [resources])` steps.
    fn plan(&self, mode: &str) -> PyResult<Vec<(String, String, Vec<String>)>> {
        let plan = planner::plan(&self.inner, parse_mode(mode)?).map_err(domain_err)?;
        Ok(plan
            .steps
            .into_iter()
            .map(|s| {
                let resources = s.resources.into_iter().map(|r| r.to_string()).collect();
                (s.process.to_string(), s.product.to_string(), resources)
            })
            .collect())
    }

    /// The plan in the JSON plan-file format.
    fn plan_json(&self, mode: &str) -> PyResult<String> {
        let plan = planner::plan(&self.inner, parse_mode(mode)?).map_err(domain_err)?;
        Ok(native::plan_to_json(&plan))
    }

    /// Check a plan file against this network.
    fn verify<'py>(
        &self,
        py: Python<'py>,
        mode: &str,
        plan_json: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let plan = native::plan_from_json(plan_json).map_err(domain_err)?;
        report_dict(
            py,
            &planner::verify_plan(&self.inner, parse_mode(mode)?, &plan),
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "<popan.Graph with {} nodes and {} edges>",
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

#[pymodule]
#[pyo3(name = "popan")]
fn popan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add("PopanError", m.py().get_type::<PopanError>())?;
    Ok(())
}
