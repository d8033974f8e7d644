//! Python bindings for the `mlqi` crate.

use std::cell::RefCell;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mlqi::analysis::{self, MpVariant, TruncationState};
use mlqi::kernel;

fn to_py(e: mlqi::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "EvalSpec", module = "pymlqi", from_py_object)]
#[derive(Clone)]
struct PyEvalSpec {
    inner: mlqi::EvalSpec,
}

#[pymethods]
impl PyEvalSpec {
    #[new]
    #[pyo3(signature = (window_radius=14.0, eta=1e-40, max_freq=65536, eval_points=8192))]
    fn new(window_radius: f64, eta: f64, max_freq: usize, eval_points: usize) -> PyResult<Self> {
        let inner = mlqi::EvalSpec {
            window_radius,
            eta,
            max_freq,
            eval_points,
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn window_radius(&self) -> f64 {
        self.inner.window_radius
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }

    #[getter]
    fn max_freq(&self) -> usize {
        self.inner.max_freq
    }

    #[getter]
    fn eval_points(&self) -> usize {
        self.inner.eval_points
    }

    fn __repr__(&self) -> String {
        format!(
            "EvalSpec(window_radius={}, eta={:e}, max_freq={}, eval_points={})",
            self.inner.window_radius, self.inner.eta, self.inner.max_freq, self.inner.eval_points
        )
    }
}

fn spec_or_default(spec: Option<PyEvalSpec>) -> mlqi::EvalSpec {
    spec.map(|s| s.inner).unwrap_or_default()
}

#[pyclass(name = "CosineSeries", module = "pymlqi", from_py_object)]
#[derive(Clone)]
struct PyCosineSeries {
    inner: mlqi::CosineSeries,
}

#[pymethods]
impl PyCosineSeries {
    #[new]
    fn new(coeffs: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: mlqi::CosineSeries::from_coeffs(coeffs).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn cosine(m: usize) -> Self {
        Self {
            inner: mlqi::CosineSeries::cosine(m),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: mlqi::CosineSeries::from_json(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: mlqi::CosineSeries::from_csv(text).map_err(to_py)?,
        })
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn max_freq(&self) -> usize {
        self.inner.max_freq()
    }

    fn __call__(&self, x: f64) -> f64 {
        mlqi::eval_series(&self.inner, x)
    }

    fn __add__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    fn __mul__(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.scaled(factor),
        }
    }

    fn __rmul__(&self, factor: f64) -> Self {
        self.__mul__(factor)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __len__(&self) -> usize {
        self.inner.coeffs().len()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn wiener_norm(&self) -> f64 {
        mlqi::wiener_norm(&self.inner)
    }

    fn sobolev_norm(&self, s: f64) -> f64 {
        mlqi::sobolev_norm(&self.inner, s)
    }

    #[pyo3(signature = (spec=None))]
    fn sup_norm(&self, spec: Option<PyEvalSpec>) -> f64 {
        mlqi::sup_norm_estimate(&self.inner, &spec_or_default(spec))
    }

    fn __repr__(&self) -> String {
        format!("CosineSeries(max_freq={})", self.inner.max_freq())
    }
}

#[pyclass(name = "TruncationState", module = "pymlqi", frozen)]
struct PyTruncationState {
    inner: TruncationState,
}

#[pymethods]
impl PyTruncationState {
    #[getter]
    fn p(&self) -> u32 {
        self.inner.p
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.m
    }

    #[getter]
    fn ell(&self) -> u32 {
        self.inner.ell
    }

    #[getter]
    fn alpha_bar(&self) -> Vec<f64> {
        self.inner.alpha_bar.clone()
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.inner.alpha.clone()
    }

    #[getter]
    fn remainder_budget(&self) -> f64 {
        self.inner.remainder_budget
    }

    fn step(&self) -> Self {
        Self {
            inner: self.inner.step(),
        }
    }

    fn norm(&self) -> f64 {
        analysis::truncation_norm(&self.inner)
    }

    fn to_series(&self) -> PyCosineSeries {
        PyCosineSeries {
            inner: self.inner.to_series(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "TruncationState(p={}, m={}, ell={})",
            self.inner.p, self.inner.m, self.inner.ell
        )
    }
}

#[pyfunction]
fn psi(x: f64) -> f64 {
    mlqi::psi(x)
}

#[pyfunction]
fn psi_hat(t: f64) -> f64 {
    mlqi::psi_hat(t)
}

#[pyfunction]
fn theta3_series(z: f64, q: f64) -> PyResult<f64> {
    kernel::theta3_series(z, q).map_err(to_py)
}

#[pyfunction]
fn theta3_product(z: f64, q: f64) -> PyResult<f64> {
    kernel::theta3_product(z, q).map_err(to_py)
}

#[pyfunction]
fn periodized_sum_e(t: f64) -> f64 {
    kernel::periodized_sum_e(t)
}

#[pyfunction]
fn bound_constants(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let c = mlqi::bound_constants();
    let d = PyDict::new(py);
    d.set_item("a", c.qi_norm)?;
    d.set_item("A", c.error_norm)?;
    d.set_item("epsilon", c.epsilon)?;
    d.set_item("mu_a", c.mu_a)?;
    d.set_item("mu_b", c.mu_b)?;
    d.set_item("mu_c", c.mu_c)?;
    d.set_item("b", c.mu_bc)?;
    Ok(d)
}

/// Samples at `j / 2^ell`.
#[pyfunction]
fn sample(f: &PyCosineSeries, ell: u32) -> PyResult<Vec<f64>> {
    Ok(mlqi::sample(&f.inner, ell)
        .map_err(to_py)?
        .values()
        .to_vec())
}

#[pyfunction]
#[pyo3(signature = (values, x, spec=None))]
fn qi_eval_direct(values: Vec<f64>, x: f64, spec: Option<PyEvalSpec>) -> PyResult<f64> {
    let n = values.len();
    if !n.is_power_of_two() {
        return Err(PyValueError::new_err(
            "number of samples must be a power of two",
        ));
    }
    let s = mlqi::GridSamples::new(n.trailing_zeros(), values).map_err(to_py)?;
    Ok(mlqi::qi_eval_direct(&s, x, &spec_or_default(spec)))
}

/// Returns `(series, spilled_mass)`.
#[pyfunction]
#[pyo3(signature = (f, ell, spec=None))]
fn qi_spectral(
    f: &PyCosineSeries,
    ell: u32,
    spec: Option<PyEvalSpec>,
) -> PyResult<(PyCosineSeries, f64)> {
    let q = mlqi::qi_spectral(&f.inner, ell, &spec_or_default(spec)).map_err(to_py)?;
    Ok((PyCosineSeries { inner: q.series }, q.spilled_mass))
}

fn reports_to_py<'py>(
    py: Python<'py>,
    reports: &[mlqi::LevelReport],
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    reports
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("p", r.p)?;
            d.set_item("spacing", r.spacing)?;
            d.set_item("sup_error", r.sup_error)?;
            d.set_item("wiener_error", r.wiener_error)?;
            d.set_item("spilled_mass", r.spilled_mass)?;
            d.set_item("roundoff_dominated", r.roundoff_dominated)?;
            if let Some(res) = &r.residual {
                d.set_item("residual", PyCosineSeries { inner: res.clone() })?;
            }
            Ok(d)
        })
        .collect()
}

/// Spectral multilevel run; one dict per level.
#[pyfunction]
#[pyo3(signature = (f, ell0, levels, spec=None))]
fn multilevel_spectral<'py>(
    py: Python<'py>,
    f: &PyCosineSeries,
    ell0: u32,
    levels: u32,
    spec: Option<PyEvalSpec>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = mlqi::RunConfig {
        spec: spec_or_default(spec),
        ..mlqi::RunConfig::new(ell0, levels, mlqi::Mode::Spectral)
    };
    let reports = mlqi::multilevel_spectral(&f.inner, &cfg).map_err(to_py)?;
    reports_to_py(py, &reports)
}

/// Sampled multilevel run driven by a Python callable `f(x) -> float`.
#[pyfunction]
#[pyo3(signature = (f, ell0, levels, spec=None))]
fn multilevel_sampled<'py>(
    py: Python<'py>,
    f: Bound<'py, PyAny>,
    ell0: u32,
    levels: u32,
    spec: Option<PyEvalSpec>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = mlqi::RunConfig {
        spec: spec_or_default(spec),
        ..mlqi::RunConfig::new(ell0, levels, mlqi::Mode::Sampled)
    };
    let failure: RefCell<Option<PyErr>> = RefCell::new(None);
    let call = |x: f64| -> f64 {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        match f.call1((x,)).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    };
    let reports = mlqi::multilevel_sampled(call, &cfg).map_err(to_py)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    reports_to_py(py, &reports)
}

#[pyfunction]
fn init_truncation(m: u64, ell: u32) -> PyResult<PyTruncationState> {
    Ok(PyTruncationState {
        inner: analysis::init_truncation(m, ell).map_err(to_py)?,
    })
}

#[pyfunction]
#[pyo3(signature = (m, ell, levels, spec=None))]
fn verify_truncation(m: u64, ell: u32, levels: u32, spec: Option<PyEvalSpec>) -> PyResult<f64> {
    analysis::verify_truncation(m, ell, levels, &spec_or_default(spec)).map_err(to_py)
}

/// One dict per inequality family with `checked` and `violations`.
#[pyfunction]
fn scan_lemma_bounds(
    py: Python<'_>,
    m: u64,
    ell: u32,
    levels: u32,
) -> PyResult<Vec<Bound<'_, PyDict>>> {
    analysis::scan_lemma_bounds(m, ell, levels)
        .map_err(to_py)?
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("family", r.family.name())?;
            d.set_item("checked", r.checked)?;
            let v: Vec<(u32, Option<usize>, f64, f64)> = r
                .violations
                .iter()
                .map(|v| (v.p, v.j, v.lhs, v.rhs))
                .collect();
            d.set_item("violations", v)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (levels, variant="table-consistent"))]
fn mp_sequence(levels: u32, variant: &str) -> PyResult<Vec<f64>> {
    let v: MpVariant = variant.parse().map_err(to_py)?;
    analysis::mp_sequence(levels, v).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (s, t, p, f_norm_s=1.0, big_b=10.0))]
fn theorem_bound(
    py: Python<'_>,
    s: f64,
    t: f64,
    p: u32,
    f_norm_s: f64,
    big_b: f64,
) -> PyResult<Bound<'_, PyDict>> {
    let b = analysis::theorem_bound(s, t, p, f_norm_s, big_b).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("c_t", b.c_t)?;
    d.set_item("d_s", b.d_s)?;
    d.set_item("low", b.low)?;
    d.set_item("tail", b.tail)?;
    d.set_item("remainder", b.remainder)?;
    d.set_item("total", b.total)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (ell, n, p, spec=None))]
fn highfreq_identity_check(ell: u32, n: u64, p: u32, spec: Option<PyEvalSpec>) -> PyResult<f64> {
    analysis::highfreq_identity_check(ell, n, p, &spec_or_default(spec)).map_err(to_py)
}

#[pymodule]
fn pymlqi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEvalSpec>()?;
    m.add_class::<PyCosineSeries>()?;
    m.add_class::<PyTruncationState>()?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(psi_hat, m)?)?;
    m.add_function(wrap_pyfunction!(theta3_series, m)?)?;
    m.add_function(wrap_pyfunction!(theta3_product, m)?)?;
    m.add_function(wrap_pyfunction!(periodized_sum_e, m)?)?;
    m.add_function(wrap_pyfunction!(bound_constants, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(qi_eval_direct, m)?)?;
    m.add_function(wrap_pyfunction!(qi_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(multilevel_spectral, m)?)?;
    m.add_function(wrap_pyfunction!(multilevel_sampled, m)?)?;
    m.add_function(wrap_pyfunction!(init_truncation, m)?)?;
    m.add_function(wrap_pyfunction!(verify_truncation, m)?)?;
    m.add_function(wrap_pyfunction!(scan_lemma_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(mp_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_bound, m)?)?;
    m.add_function(wrap_pyfunction!(highfreq_identity_check, m)?)?;
    Ok(())
}
