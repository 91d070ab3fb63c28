//! Python bindings. Rationals leave as `fractions.Fraction` and enter as
//! anything whose `str()` is `"p/q"` or `"p"` (int, str, Fraction).
//! Reports are returned as the documents the command line prints in
//! machine format, so their rationals stay strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value as Json;

use gossez_core::format::{cert_json, gap_json, membership_json, value_json};
use gossez_core::suite::{self, OutputFormat, RunConfig};
use gossez_core::{exact, expr, operators, Exact, Linear, Rat};

fn value_error(err: impl ToString) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn to_rat(obj: &Bound<'_, PyAny>) -> PyResult<Rat> {
    exact::parse_rat(&obj.str()?.to_string()).map_err(value_error)
}

fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn loads<'py>(py: Python<'py>, doc: &Json) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (doc.to_string(),))
}

/// Finitely supported sequence in `ℓ¹`, built from `{index: rational}`
/// with 1-based indices.
#[pyclass(name = "FinSeq", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyFinSeq(exact::FinSeq);

#[pymethods]
impl PyFinSeq {
    #[new]
    #[pyo3(signature = (entries=None))]
    fn new(entries: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut pairs = Vec::new();
        if let Some(d) = entries {
            for (k, v) in d.iter() {
                pairs.push((k.extract::<usize>()?, to_rat(&v)?));
            }
        }
        exact::FinSeq::from_pairs(pairs).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn delta(i: usize) -> PyResult<Self> {
        if i == 0 {
            return Err(value_error("indices start at 1"));
        }
        Ok(Self(exact::FinSeq::delta(i)))
    }

    fn __getitem__<'py>(&self, py: Python<'py>, k: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.get(k))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// `⟨x, e⟩`.
    fn sum<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.sum())
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in self.0.iter() {
            d.set_item(k, fraction(py, v)?)?;
        }
        Ok(d)
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __mul__(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(self.0.scaled(&to_rat(c)?)))
    }

    fn __rmul__(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.__mul__(c)
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// Eventually constant sequence in `c`: `head` followed by `tail` forever.
#[pyclass(name = "EvConstSeq", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyEvConstSeq(exact::EvConstSeq);

#[pymethods]
impl PyEvConstSeq {
    #[new]
    #[pyo3(signature = (head, tail))]
    fn new(head: &Bound<'_, PyList>, tail: &Bound<'_, PyAny>) -> PyResult<Self> {
        let head = head.iter().map(|v| to_rat(&v)).collect::<PyResult<Vec<_>>>()?;
        Ok(Self(exact::EvConstSeq::new(head, to_rat(tail)?)))
    }

    /// The all-ones sequence `e`.
    #[staticmethod]
    fn ones() -> Self {
        Self(exact::EvConstSeq::ones())
    }

    #[getter]
    fn head<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.head().iter().map(|v| fraction(py, v)).collect()
    }

    #[getter]
    fn tail<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.tail())
    }

    fn __getitem__<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        if n == 0 {
            return Err(value_error("indices start at 1"));
        }
        fraction(py, &self.0.get(n))
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __mul__(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(self.0.scaled(&to_rat(c)?)))
    }

    fn __rmul__(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.__mul__(c)
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// Functional on `c`: `y ↦ ⟨abs, y⟩ + lim · lim y`.
#[pyclass(name = "LimFunctional", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyLimFunctional(exact::LimFunctional);

#[pymethods]
impl PyLimFunctional {
    #[new]
    #[pyo3(signature = (abs, lim))]
    fn new(abs: &PyFinSeq, lim: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(exact::LimFunctional::new(abs.0.clone(), to_rat(lim)?)))
    }

    #[staticmethod]
    fn limit(lim: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(exact::LimFunctional::limit(to_rat(lim)?)))
    }

    fn __call__<'py>(&self, py: Python<'py>, y: &PyEvConstSeq) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.evaluate(&y.0))
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// `⟨x, y⟩` for `x ∈ ℓ¹`, `y ∈ c`.
#[pyfunction]
fn pair<'py>(py: Python<'py>, x: &PyFinSeq, y: &PyEvConstSeq) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &exact::pair_l1_c(&x.0, &y.0))
}

#[pyfunction]
fn apply_g(x: &PyFinSeq) -> PyEvConstSeq {
    PyEvConstSeq(operators::apply_g(&x.0))
}

#[pyfunction]
fn apply_a(x: &PyFinSeq) -> PyFinSeq {
    PyFinSeq(operators::apply_a(&x.0))
}

#[pyfunction]
fn solve_a(y: &PyFinSeq) -> PyFinSeq {
    PyFinSeq(operators::solve_a(&y.0))
}

/// The `n × n` truncation of `A`, as rows of Fractions.
#[pyfunction]
fn trunc_matrix<'py>(py: Python<'py>, n: usize) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    let m = operators::trunc_matrix(n).map_err(value_error)?;
    m.rows().iter().map(|row| row.iter().map(|v| fraction(py, v)).collect()).collect()
}

#[pyfunction]
fn type_d_gap<'py>(py: Python<'py>, xstar: &PyFinSeq, xss: &PyEvConstSeq) -> PyResult<Bound<'py, PyAny>> {
    loads(py, &gap_json(&gossez_core::type_d_gap(&xstar.0, &xss.0)))
}

#[pyfunction]
fn closure_membership<'py>(py: Python<'py>, xss: &PyEvConstSeq, xstar: &PyFinSeq) -> PyResult<Bound<'py, PyAny>> {
    loads(py, &membership_json(&gossez_core::closure_membership(&xss.0, &xstar.0)))
}

#[pyfunction]
fn inverse_type_d_certificate<'py>(
    py: Python<'py>,
    xss0: &PyEvConstSeq,
    xsss0: &PyLimFunctional,
) -> PyResult<Bound<'py, PyAny>> {
    loads(py, &cert_json(&gossez_core::inverse_type_d_certificate(&xss0.0, &xsss0.0)))
}

#[pyfunction]
fn counterexample_pipeline(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let report = gossez_core::counterexample_pipeline().map_err(value_error)?;
    loads(py, &cert_json(&report))
}

/// Evaluates an expression; errors carry the stable code as a prefix.
#[pyfunction]
fn eval_expr<'py>(py: Python<'py>, source: &str) -> PyResult<Bound<'py, PyAny>> {
    let value = expr::eval_str(source).map_err(|e| value_error(format!("{}: {e}", e.code())))?;
    loads(py, &value_json(&value))
}

fn run_config(seed: u64, samples: usize, max_support: usize, max_magnitude: u64) -> PyResult<RunConfig> {
    let config = RunConfig {
        seed,
        sample_count: samples,
        max_support,
        max_magnitude,
        output_format: OutputFormat::Machine,
    };
    config.validate().map_err(value_error)?;
    Ok(config)
}

/// Full verification report; `report["passed"]` is the overall outcome.
#[pyfunction]
#[pyo3(signature = (seed=RunConfig::default().seed, samples=RunConfig::default().sample_count,
                    max_support=RunConfig::default().max_support, max_magnitude=RunConfig::default().max_magnitude))]
fn verify_paper(py: Python<'_>, seed: u64, samples: usize, max_support: usize, max_magnitude: u64) -> PyResult<Bound<'_, PyAny>> {
    let config = run_config(seed, samples, max_support, max_magnitude)?;
    let report = py.detach(|| suite::verify_paper(&config, &Exact));
    loads(py, &report.to_json())
}

#[pyfunction]
#[pyo3(signature = (seed=RunConfig::default().seed, samples=RunConfig::default().sample_count,
                    max_support=RunConfig::default().max_support, max_magnitude=RunConfig::default().max_magnitude))]
fn random_check(py: Python<'_>, seed: u64, samples: usize, max_support: usize, max_magnitude: u64) -> PyResult<Bound<'_, PyAny>> {
    let config = run_config(seed, samples, max_support, max_magnitude)?;
    let report = py.detach(|| suite::random_suite(&config, &Exact));
    loads(py, &report.to_json())
}

#[pymodule]
fn gossez(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFinSeq>()?;
    m.add_class::<PyEvConstSeq>()?;
    m.add_class::<PyLimFunctional>()?;
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(apply_g, m)?)?;
    m.add_function(wrap_pyfunction!(apply_a, m)?)?;
    m.add_function(wrap_pyfunction!(solve_a, m)?)?;
    m.add_function(wrap_pyfunction!(trunc_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(type_d_gap, m)?)?;
    m.add_function(wrap_pyfunction!(closure_membership, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_type_d_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(eval_expr, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    m.add_function(wrap_pyfunction!(random_check, m)?)?;
    Ok(())
}
