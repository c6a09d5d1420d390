//! Python bindings: check matrices, frames, searches and circulant scans.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use eaqec::catalog::{catalog, lookup};
use eaqec::circulant::{scan, ScanOptions};
use eaqec::code::{analyze, validate, CodeReport};
use eaqec::io::{parse_check_matrix, write_check_matrix};
use eaqec::search::{exhaustive_optimize, random_search, EbitPolicy, OptimizationResult, SearchSpec};
use eaqec::{
    count_partner_subspaces, synthesize_encoding, BitMatrix, EbitPattern, Error, FrameOp, SimplifiedCheckMatrix,
    SymplecticFrame,
};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CostExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn report_dict<'py>(py: Python<'py>, rep: &CodeReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let p = rep.params;
    d.set_item("n", p.n)?;
    d.set_item("k", p.k)?;
    d.set_item("c", p.c)?;
    d.set_item("d", p.d)?;
    d.set_item("degenerate", p.degenerate)?;
    d.set_item("singleton_saturated", rep.singleton_saturated)?;
    d.set_item("weight_enumerator", rep.enumerator.0.clone())?;
    Ok(d)
}

/// A simplified check matrix.
#[pyclass(name = "CheckMatrix", module = "eaqec_py", from_py_object)]
#[derive(Clone)]
struct PyCheckMatrix {
    inner: SimplifiedCheckMatrix,
}

#[pymethods]
impl PyCheckMatrix {
    /// Rows written as `"xbits|zbits"`.
    #[new]
    fn new(rows: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let inner = SimplifiedCheckMatrix::from_strs(&refs).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_check_matrix(text).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: lookup(name).map_err(py_err)?.check,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn ebits(&self) -> usize {
        self.inner.ebits()
    }

    #[getter]
    fn k(&self) -> PyResult<usize> {
        self.inner.k().map_err(py_err)
    }

    fn rows(&self) -> Vec<String> {
        let n = self.inner.n();
        self.inner
            .matrix()
            .rows()
            .iter()
            .map(|r| {
                let s = r.to_string();
                format!("{}|{}", &s[..n], &s[n..])
            })
            .collect()
    }

    fn to_text(&self) -> String {
        write_check_matrix(&self.inner)
    }

    /// Dict with n, k, c, d, degenerate, singleton_saturated, weight_enumerator.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = analyze(&self.inner).map_err(py_err)?;
        report_dict(py, &rep)
    }

    fn distance(&self) -> PyResult<usize> {
        Ok(eaqec::min_distance(&self.inner).map_err(py_err)?.0)
    }

    /// Violations as strings; empty when valid.
    fn validate(&self) -> Vec<String> {
        validate(&self.inner, None).iter().map(ToString::to_string).collect()
    }

    /// Encoding circuit in the text gate format.
    fn synthesize(&self) -> PyResult<String> {
        Ok(synthesize_encoding(&self.inner).map_err(py_err)?.circuit.to_text())
    }

    fn __repr__(&self) -> String {
        format!(
            "CheckMatrix(n={}, m={}, c={})",
            self.inner.n(),
            self.inner.rows(),
            self.inner.ebits()
        )
    }
}

/// Symplectic frame of a standard code: stabilizers, partners and logicals.
#[pyclass(name = "Frame", module = "eaqec_py")]
struct PyFrame {
    inner: SymplecticFrame,
}

#[pymethods]
impl PyFrame {
    #[staticmethod]
    fn from_code(code: &PyCheckMatrix) -> PyResult<Self> {
        Ok(Self {
            inner: SymplecticFrame::from_code(&code.inner).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn canonical(n: usize, k: usize) -> PyResult<Self> {
        Ok(Self {
            inner: SymplecticFrame::canonical(n, k).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    /// Row operation of type 1..=4 on slots `l`, `m` (0-based).
    fn apply(&mut self, kind: u8, l: usize, m: usize) -> PyResult<()> {
        let op = FrameOp::from_type(kind, l, m).map_err(py_err)?;
        self.inner.apply(op).map_err(py_err)
    }

    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }

    /// Check matrix of all stabilizers plus the partners in `slots`.
    fn induced_code(&self, slots: Vec<usize>) -> PyResult<PyCheckMatrix> {
        let t = EbitPattern::new(self.inner.r(), slots).map_err(py_err)?;
        let (inner, _) = self.inner.induced_code(&t).map_err(py_err)?;
        Ok(PyCheckMatrix { inner })
    }

    /// Applies a partner choice given as `c` rows of `r` bits in reduced echelon form.
    fn apply_partner_choice(&mut self, slots: Vec<usize>, rows: Vec<String>) -> PyResult<()> {
        let t = EbitPattern::new(self.inner.r(), slots).map_err(py_err)?;
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let mv = BitMatrix::from_strs(&refs).map_err(py_err)?;
        let mv = eaqec::PartnerSubspace::new(mv).map_err(py_err)?;
        self.inner.apply_partner_choice(&t, &mv).map_err(py_err)
    }
}

fn result_dict<'py>(py: Python<'py>, r: &OptimizationResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("c", r.c)?;
    d.set_item("d_opt", r.d_opt)?;
    d.set_item("n_opt", r.n_opt)?;
    d.set_item("total", r.total)?;
    d.set_item("degenerate_optima", r.degenerate_optima)?;
    d.set_item("trials_to_best", r.trials_to_best)?;
    d.set_item("elapsed_s", r.elapsed.as_secs_f64())?;
    if let Some(ex) = r.exemplars.first() {
        d.set_item(
            "exemplar",
            PyCheckMatrix {
                inner: ex.check.clone(),
            },
        )?;
    }
    Ok(d)
}

/// Exhaustive optimization over encoding operators with `c` ebits.
#[pyfunction]
#[pyo3(signature = (code, c, max_cost=None, threads=None))]
fn optimize<'py>(
    py: Python<'py>,
    code: &PyCheckMatrix,
    c: usize,
    max_cost: Option<u128>,
    threads: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let frame = SymplecticFrame::from_code(&code.inner).map_err(py_err)?;
    let mut spec = SearchSpec::new(frame, c).map_err(py_err)?;
    if let Some(m) = max_cost {
        spec.max_cost = m;
    }
    spec.threads = threads;
    let r = py.detach(|| exhaustive_optimize(&spec)).map_err(py_err)?;
    result_dict(py, &r)
}

#[pyfunction(name = "random_search")]
#[pyo3(signature = (code, c, iters=10_000, seed=0, restart=false, target=None))]
fn py_random_search<'py>(
    py: Python<'py>,
    code: &PyCheckMatrix,
    c: usize,
    iters: u64,
    seed: u64,
    restart: bool,
    target: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let frame = SymplecticFrame::from_code(&code.inner).map_err(py_err)?;
    let mut spec = SearchSpec::new(frame, c).map_err(py_err)?;
    spec.ebits = EbitPolicy::Random;
    spec.budget = iters;
    spec.seed = seed;
    spec.restart = restart;
    spec.target_distance = target;
    let r = py.detach(|| random_search(&spec)).map_err(py_err)?;
    result_dict(py, &r)
}

#[pyfunction(name = "circulant_scan")]
#[pyo3(signature = (n, rmin=None, rmax=None, full=false))]
fn py_circulant_scan<'py>(
    py: Python<'py>,
    n: usize,
    rmin: Option<usize>,
    rmax: Option<usize>,
    full: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut o = ScanOptions::new(n);
    o.r_min = rmin.unwrap_or(o.r_min);
    o.r_max = rmax.unwrap_or(o.r_max);
    o.all_tuples = full;
    let rows = py.detach(|| scan(n, &o)).map_err(py_err)?;
    rows.iter()
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("n", e.n)?;
            d.set_item("r", e.r)?;
            d.set_item("k", e.k)?;
            d.set_item("c", e.c)?;
            d.set_item("d", e.d)?;
            d.set_item("seed_hex", e.seed_hex())?;
            d.set_item("degenerate", e.degenerate)?;
            d.set_item("saturates_singleton", e.saturates_singleton)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction(name = "count_partner_subspaces")]
fn py_count_partner_subspaces(r: usize, c: usize) -> PyResult<u128> {
    count_partner_subspaces(r, c).map_err(py_err)
}

#[pyfunction]
fn catalog_names() -> Vec<String> {
    catalog().into_iter().map(|e| e.name).collect()
}

#[pyfunction(name = "singleton_bound")]
fn py_singleton_bound(n: usize, k: usize, c: usize) -> PyResult<usize> {
    eaqec::singleton_bound(n, k, c).map_err(py_err)
}

#[pymodule]
fn eaqec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCheckMatrix>()?;
    m.add_class::<PyFrame>()?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(py_random_search, m)?)?;
    m.add_function(wrap_pyfunction!(py_circulant_scan, m)?)?;
    m.add_function(wrap_pyfunction!(py_count_partner_subspaces, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(py_singleton_bound, m)?)?;
    Ok(())
}
