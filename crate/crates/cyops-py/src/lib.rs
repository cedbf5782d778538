//! Python bindings for the `cyops` engine.
//!
//! Rationals cross the boundary as `fractions.Fraction`; structured reports as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;
use serde::Serialize;

use cyops::catalog::{self, Case, TableFormat};
use cyops::hypergeom::{hypergeom_series, HypergeomSpec};
use cyops::periods::{
    monodromy_records, reduce_parameters, twist_period_params, verify_clausen, verify_kummer_quadratic,
    verify_mirror_factorizations, CheckRecord,
};
use cyops::rational::{fmt_q, parse_q, Q};
use cyops::series::Series;
use cyops::weierstrass::FunctionalInvariant;
use cyops::CyError;

create_exception!(cyops_py, CyopsError, PyValueError);

fn err(e: CyError) -> PyErr {
    CyopsError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| CyopsError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, x: &Q) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_q(x),))
}

fn fractions<'py>(py: Python<'py>, xs: &[Q]) -> PyResult<Bound<'py, PyList>> {
    let items = xs.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn rationals(xs: &[String]) -> PyResult<Vec<Q>> {
    xs.iter().map(|s| parse_q(s).map_err(err)).collect()
}

fn series_out<'py>(py: Python<'py>, s: &Series) -> PyResult<Bound<'py, PyList>> {
    fractions(py, s.coeffs())
}

/// A generalized hypergeometric series pFq with rational parameters.
#[pyclass(name = "HypergeometricSpec", frozen)]
struct PyHypergeom(HypergeomSpec);

#[pymethods]
impl PyHypergeom {
    /// `lower = None` gives the balanced form with all lower parameters 1.
    #[new]
    #[pyo3(signature = (upper, lower=None))]
    fn new(upper: Vec<String>, lower: Option<Vec<String>>) -> PyResult<Self> {
        let upper = rationals(&upper)?;
        Ok(PyHypergeom(match lower {
            Some(l) => HypergeomSpec::new(upper, rationals(&l)?),
            None => HypergeomSpec::balanced(upper),
        }))
    }

    /// Coefficients of t^0..t^n.
    fn series<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyList>> {
        series_out(py, &hypergeom_series(&self.0, n).map_err(err)?)
    }

    /// Hadamard product with the twist multiplier of invariant `(i, j, alpha)`, parameters reduced.
    fn twist(&self, i: u32, j: u32, alpha: &str) -> PyResult<Self> {
        let inv = FunctionalInvariant::new(i, j, parse_q(alpha).map_err(err)?).map_err(err)?;
        Ok(PyHypergeom(reduce_parameters(&twist_period_params(&inv), &self.0).map_err(err)?))
    }

    fn same_parameters(&self, other: &PyHypergeom) -> bool {
        self.0.same_parameters(&other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("HypergeometricSpec({})", self.0)
    }
}

/// One operator of the catalog with its period recipe.
#[pyclass(name = "CatalogEntry", frozen)]
struct PyEntry(catalog::CatalogEntry);

#[pymethods]
impl PyEntry {
    #[getter]
    fn case(&self) -> String {
        self.0.case.to_string()
    }

    #[getter]
    fn index(&self) -> u32 {
        self.0.index
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }

    #[getter]
    fn aesz_id(&self) -> Option<String> {
        self.0.aesz_id.clone()
    }

    #[getter]
    fn parameters<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, &self.0.parameters)
    }

    #[getter]
    fn operator(&self) -> String {
        self.0.operator.render()
    }

    /// Period coefficients of t^0..t^n.
    fn period<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyList>> {
        series_out(py, &self.0.period_series(n).map_err(err)?)
    }

    /// Whether the operator kills the period through order n.
    fn annihilates(&self, n: usize) -> PyResult<bool> {
        let s = self.0.period_series(n).map_err(err)?;
        Ok(self.0.operator.annihilates(&s).vanishes)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    fn __repr__(&self) -> String {
        format!("CatalogEntry({})", self.0.label())
    }
}

fn entries(case: Option<&str>) -> PyResult<Vec<catalog::CatalogEntry>> {
    let case = case.map(Case::parse).transpose().map_err(err)?;
    Ok(catalog::build_catalog()
        .map_err(err)?
        .into_iter()
        .filter(|e| case.map_or(true, |c| e.case == c))
        .collect())
}

/// The 60 catalog entries, optionally restricted to one case.
#[pyfunction]
#[pyo3(signature = (case=None))]
fn build_catalog(case: Option<&str>) -> PyResult<Vec<PyEntry>> {
    Ok(entries(case)?.into_iter().map(PyEntry).collect())
}

/// Verification report as a dict; `order` must be at least 20.
#[pyfunction]
#[pyo3(signature = (order=20, seed=7, case=None))]
fn verify<'py>(py: Python<'py>, order: usize, seed: u64, case: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    if order < 20 {
        return Err(err(CyError::UnsupportedSpec(format!("order {order} is below 20"))));
    }
    let selected = entries(case)?;
    let report = py.detach(|| catalog::verify_entries(&selected, order, seed));
    to_py(py, &report)
}

/// One regenerated table as markdown, json or csv text.
#[pyfunction]
#[pyo3(signature = (table_id, format="markdown"))]
fn emit_table(table_id: &str, format: &str) -> PyResult<String> {
    catalog::emit_table(table_id, TableFormat::parse(format).map_err(err)?).map_err(err)
}

/// Check records for one identity family: clausen, kummer, mirror or monodromy.
#[pyfunction]
#[pyo3(signature = (name, mu=None, order=60))]
fn identity<'py>(py: Python<'py>, name: &str, mu: Option<&str>, order: usize) -> PyResult<Bound<'py, PyAny>> {
    let mus = match mu {
        Some(s) => vec![parse_q(s).map_err(err)?],
        None => ["1/2", "1/3", "1/4", "1/6"].iter().map(|s| parse_q(s).expect("literal")).collect(),
    };
    let records: Vec<CheckRecord> = match name {
        "clausen" => mus.iter().map(|m| verify_clausen(m, order)).collect::<Result<_, _>>(),
        "kummer" => mus.iter().map(|m| verify_kummer_quadratic(m, order)).collect::<Result<_, _>>(),
        "mirror" => verify_mirror_factorizations(order),
        "monodromy" => monodromy_records(),
        other => Err(CyError::UnsupportedSpec(format!("identity {other:?}"))),
    }
    .map_err(err)?;
    to_py(py, &records)
}

#[pymodule]
fn cyops_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CyopsError", m.py().get_type::<CyopsError>())?;
    m.add_class::<PyHypergeom>()?;
    m.add_class::<PyEntry>()?;
    m.add_function(wrap_pyfunction!(build_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(emit_table, m)?)?;
    m.add_function(wrap_pyfunction!(identity, m)?)?;
    Ok(())
}
