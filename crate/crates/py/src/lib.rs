//! Python bindings for `davenport-core`.
//!
//! Exact rationals come back as `fractions.Fraction`; structured results
//! (expansion rows, audits, tables) come back as plain dicts and lists.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use davenport_core::arith::{self, ConvolutionTable};
use davenport_core::davenport::{self as dv, EvalMode, FormulaMode};
use davenport_core::mellin::{self, QuadratureConfig};
use davenport_core::report;
use davenport_core::special;
use davenport_core::Error;

fn to_py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Pole { .. } => PyZeroDivisionError::new_err(msg),
        Error::Divergent(_) | Error::TailNotMet { .. } => PyArithmeticError::new_err(msg),
        Error::Io(_) => PyOSError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for davenport_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn from_json<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn formula_mode(name: &str) -> PyResult<FormulaMode> {
    match name {
        "corrected" => Ok(FormulaMode::Corrected),
        "paper" | "paper_literal" | "literal" => Ok(FormulaMode::Literal),
        _ => Err(PyValueError::new_err(format!("unknown formula {name:?}; use 'corrected' or 'paper'"))),
    }
}

#[pyfunction]
fn frac(x: f64) -> f64 {
    special::frac(x)
}

#[pyfunction]
fn bernoulli_number<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &special::bernoulli_number(n).py()?)
}

#[pyfunction]
fn bernoulli_poly(n: usize, y: f64) -> PyResult<f64> {
    special::bernoulli_poly(n, y).py()
}

#[pyfunction]
fn gamma(s: Complex64) -> PyResult<Complex64> {
    special::gamma(s).py()
}

#[pyfunction]
fn pochhammer(s: Complex64, k: u32) -> Complex64 {
    special::pochhammer(s, k)
}

#[pyfunction]
fn riemann_zeta(s: Complex64) -> PyResult<Complex64> {
    special::riemann_zeta(s).py()
}

#[pyfunction]
fn hurwitz_zeta(s: Complex64, y: f64) -> PyResult<Complex64> {
    special::hurwitz_zeta(s, y).py()
}

#[pyfunction]
fn zeta_neg_int<'py>(py: Python<'py>, k: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &special::zeta_neg_int(k))
}

/// Outcome of one identity check.
#[pyclass(name = "VerificationReport", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyReport {
    inner: report::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn order(&self) -> u32 {
        self.inner.order
    }
    #[getter]
    fn s(&self) -> Complex64 {
        self.inner.s
    }
    #[getter]
    fn lhs(&self) -> Complex64 {
        self.inner.lhs
    }
    #[getter]
    fn rhs(&self) -> Complex64 {
        self.inner.rhs
    }
    #[getter]
    fn abs_err(&self) -> f64 {
        self.inner.abs_err
    }
    #[getter]
    fn rel_err(&self) -> f64 {
        self.inner.rel_err
    }
    #[getter]
    fn tol(&self) -> f64 {
        self.inner.tol
    }
    #[getter]
    fn passed(&self) -> bool {
        self.inner.pass
    }
    #[getter]
    fn metadata(&self) -> BTreeMap<String, String> {
        self.inner.metadata.clone()
    }
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(|inner| Self { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }
    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(order={}, s={}, abs_err={:e}, passed={})",
            self.inner.order, self.inner.s, self.inner.abs_err, self.inner.pass
        )
    }
}

fn reports(list: Vec<report::VerificationReport>) -> Vec<PyReport> {
    list.into_iter().map(|inner| PyReport { inner }).collect()
}

#[pyfunction]
fn mellin_rhs(order: u32, s: Complex64) -> PyResult<Complex64> {
    mellin::mellin_rhs_routed(order, s).map(|(v, _)| v).py()
}

#[pyfunction]
#[pyo3(signature = (order, s, periods = 10_000, points_per_period = 64, tail_tol = 1e-9))]
fn mellin_lhs(py: Python<'_>, order: u32, s: Complex64, periods: u64, points_per_period: usize, tail_tol: f64) -> PyResult<Complex64> {
    let cfg = QuadratureConfig { periods, points_per_period, tail_tol, ..QuadratureConfig::default() };
    py.detach(|| mellin::mellin_lhs_quadrature(order, s, &cfg)).map(|q| q.value).py()
}

#[pyfunction]
#[pyo3(signature = (order, grid, tol = 1e-7))]
fn verify_mellin_transform(py: Python<'_>, order: u32, grid: Vec<Complex64>, tol: f64) -> PyResult<Vec<PyReport>> {
    let check = py.detach(|| mellin::verify_mellin_transform(order, &grid, tol, &QuadratureConfig::default())).py()?;
    Ok(reports(check.reports))
}

#[pyfunction]
#[pyo3(signature = (order, s, tol = 1e-8))]
fn hurwitz_moment_check(order: u32, s: Complex64, tol: f64) -> PyResult<PyReport> {
    mellin::hurwitz_moment_check(order, s, tol).map(|inner| PyReport { inner }).py()
}

#[pyfunction]
#[pyo3(signature = (k, s_seq = vec![1e-3, 1e-4, 1e-5], tol = 1e-6))]
fn residue_limit_check(k: u32, s_seq: Vec<f64>, tol: f64) -> PyResult<PyReport> {
    dv::residue_limit_check(k, &s_seq, tol).map(|inner| PyReport { inner }).py()
}

#[pyfunction]
#[pyo3(signature = (order, formula = "corrected"))]
fn expansion_constant<'py>(py: Python<'py>, order: u32, formula: &str) -> PyResult<Bound<'py, PyAny>> {
    let c = dv::expansion_constant(order, formula_mode(formula)?).py()?;
    fraction(py, &c.value)
}

#[pyfunction]
fn trig_sum_closed(k: u32, kind: &str, y: f64) -> PyResult<f64> {
    let kind = match kind {
        "sin" => special::Trig::Sin,
        "cos" => special::Trig::Cos,
        _ => return Err(PyValueError::new_err("kind must be 'sin' or 'cos'")),
    };
    dv::trig_sum_closed(k, kind, y).py()
}

/// Arithmetic coefficients `a(n)`: a builtin kind or a finite table.
#[pyclass(name = "Coefficients", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCoefficients {
    inner: arith::ArithmeticCoefficients,
}

#[pymethods]
impl PyCoefficients {
    /// `kind` is one of mobius, liouville, von_mangoldt, unit, delta.
    #[new]
    fn new(kind: &str) -> PyResult<Self> {
        use arith::ArithmeticCoefficients as A;
        let inner = match kind {
            "mobius" => A::Mobius,
            "liouville" => A::Liouville,
            "von_mangoldt" => A::VonMangoldt,
            "unit" => A::Unit,
            "delta" => A::Delta,
            _ => return Err(PyValueError::new_err(format!("unknown coefficient kind {kind:?}"))),
        };
        Ok(Self { inner })
    }

    /// Parses the tab-separated `n<TAB>value` table format.
    #[staticmethod]
    fn from_table_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: arith::ArithmeticCoefficients::Table(arith::parse_table(text).py()?) })
    }

    /// `{n: value}` with values given as int, float or `"p/q"` strings.
    #[staticmethod]
    fn from_dict(entries: BTreeMap<u64, Bound<'_, PyAny>>) -> PyResult<Self> {
        let mut values = Vec::with_capacity(entries.len());
        for (n, v) in entries {
            let value = if let Ok(i) = v.extract::<i64>() {
                arith::Value::from_int(i)
            } else if let Ok(s) = v.extract::<String>() {
                arith::Value::Exact(arith::parse_rational(&s).py()?)
            } else if v.hasattr("numerator")? && v.hasattr("denominator")? {
                let num: num_bigint::BigInt = v.getattr("numerator")?.extract()?;
                let den: num_bigint::BigInt = v.getattr("denominator")?.extract()?;
                arith::Value::Exact(BigRational::new(num, den))
            } else {
                arith::Value::Real(v.extract::<f64>()?)
            };
            values.push((n, value));
        }
        Ok(Self { inner: arith::ArithmeticCoefficients::Table(arith::CoefficientTable::new(values).py()?) })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    #[getter]
    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    fn coeff(&self, n: u64) -> PyResult<f64> {
        Ok(self.inner.coeff(n).py()?.to_f64())
    }

    fn __repr__(&self) -> String {
        format!("Coefficients({})", self.inner.name())
    }
}

fn table_dict<'py, T>(
    py: Python<'py>,
    table: &ConvolutionTable<T>,
    cell: impl Fn(Python<'py>, &T) -> PyResult<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyDict>>
where
    T: arith::ConvolutionScalar,
{
    let out = PyDict::new(py);
    out.set_item("n", (1..=table.max_n()).collect::<Vec<u64>>())?;
    let a: Vec<_> = table.divisor_sums().iter().map(|v| cell(py, v)).collect::<PyResult<_>>()?;
    out.set_item("A", a)?;
    let f = PyDict::new(py);
    for &k in table.k_list() {
        let col: Vec<_> = table.column(k).unwrap_or(&[]).iter().map(|v| cell(py, v)).collect::<PyResult<_>>()?;
        f.set_item(k, col)?;
    }
    out.set_item("F", f)?;
    Ok(out)
}

/// `{"n": [...], "A": [...], "F": {k: [...]}}`; entries are `Fraction` in exact mode.
#[pyfunction]
#[pyo3(signature = (coefficients, max_n, k_list, exact = None))]
fn fk_table<'py>(
    py: Python<'py>,
    coefficients: &PyCoefficients,
    max_n: u64,
    k_list: Vec<u32>,
    exact: Option<bool>,
) -> PyResult<Bound<'py, PyDict>> {
    let a = &coefficients.inner;
    if exact.unwrap_or(a.is_exact()) {
        let table = py.detach(|| arith::fk_table::<BigRational>(a, max_n, &k_list)).py()?;
        table_dict(py, &table, |py, v| fraction(py, v))
    } else {
        let table = py.detach(|| arith::fk_table::<f64>(a, max_n, &k_list)).py()?;
        table_dict(py, &table, |py, v| Ok(v.into_pyobject(py)?.into_any()))
    }
}

/// Both sides of the generalized expansion for fixed `N`, coefficients and modes.
#[pyclass(name = "ExpansionJob", frozen, skip_from_py_object)]
struct PyExpansionJob {
    inner: dv::PreparedJob,
}

#[pymethods]
impl PyExpansionJob {
    /// `mode` is truncated, abel or closed-form; `r` is the Abel factor.
    #[new]
    #[pyo3(signature = (order, coefficients, formula = "corrected", mode = "closed-form", terms = None, r = None))]
    fn new(
        py: Python<'_>,
        order: u32,
        coefficients: &PyCoefficients,
        formula: &str,
        mode: &str,
        terms: Option<u64>,
        r: Option<f64>,
    ) -> PyResult<Self> {
        let eval = match mode {
            "truncated" => EvalMode::Truncated { terms: terms.unwrap_or(100_000) },
            "abel" => match (EvalMode::abel(r.unwrap_or(dv::DEFAULT_ABEL_R)).py()?, terms) {
                (EvalMode::Abel { r, .. }, Some(terms)) => EvalMode::Abel { terms, r },
                (auto, _) => auto,
            },
            "closed-form" | "closed_form" => EvalMode::ClosedForm,
            _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
        };
        let job = dv::ExpansionJob::new(order, coefficients.inner.clone(), formula_mode(formula)?, eval).py()?;
        let inner = py.detach(|| job.prepare()).py()?;
        Ok(Self { inner })
    }

    #[getter]
    fn constant(&self) -> f64 {
        self.inner.constant()
    }

    fn lhs(&self, x: f64) -> PyResult<f64> {
        Ok(self.inner.lhs(x).py()?.value)
    }

    fn rhs(&self, x: f64) -> PyResult<f64> {
        Ok(self.inner.rhs(x).py()?.value)
    }

    /// Dict with x, lhs, rhs, per_k and tail estimates.
    fn sides<'py>(&self, py: Python<'py>, x: f64) -> PyResult<Bound<'py, PyAny>> {
        from_json(py, &self.inner.sides(x).py()?)
    }

    fn sides_grid<'py>(&self, py: Python<'py>, xs: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
        let rows = py.detach(|| self.inner.sides_grid(&xs)).py()?;
        from_json(py, &rows)
    }
}

/// Literal and corrected right sides against the left side, as a dict.
#[pyfunction]
#[pyo3(signature = (order, coefficients, xs, tol = 1e-10))]
fn audit<'py>(py: Python<'py>, order: u32, coefficients: &PyCoefficients, xs: Vec<f64>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| dv::audit(order, &coefficients.inner, &xs, tol)).py()?;
    from_json(py, &report)
}

/// Runs the command-line front-end; returns `(status, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let argv = std::iter::once("davenport".to_string()).chain(args);
    let out = py.detach(|| davenport_core::cli::run_args(argv));
    (out.status, out.stdout, out.stderr)
}

#[pymodule]
fn davenport(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReport>()?;
    m.add_class::<PyCoefficients>()?;
    m.add_class::<PyExpansionJob>()?;
    m.add_function(wrap_pyfunction!(frac, m)?)?;
    m.add_function(wrap_pyfunction!(bernoulli_number, m)?)?;
    m.add_function(wrap_pyfunction!(bernoulli_poly, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_neg_int, m)?)?;
    m.add_function(wrap_pyfunction!(mellin_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(mellin_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mellin_transform, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_moment_check, m)?)?;
    m.add_function(wrap_pyfunction!(residue_limit_check, m)?)?;
    m.add_function(wrap_pyfunction!(expansion_constant, m)?)?;
    m.add_function(wrap_pyfunction!(trig_sum_closed, m)?)?;
    m.add_function(wrap_pyfunction!(fk_table, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
