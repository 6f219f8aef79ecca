//! Python bindings: operators, plane functions, the transforms, the module
//! action and the synthesis pipeline.

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use ncfk::action::act_spectral;
use ncfk::builtins::builtin_operator;
use ncfk::ncfk::{from_bytes, to_bytes, NcfkData};
use ncfk::synthesis::decay::decay_ladder;
use ncfk::synthesis::mollifier::make_mollifier;
use ncfk::synthesis::rho::find_rho;
use ncfk::{Error, LineGrid, PlaneGrid, SchattenExponent};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) | Error::Format(_) | Error::Json(_) | Error::Csv(_) => PyIOError::new_err(e.to_string()),
        Error::InvalidArgument(_) | Error::UnsupportedGrid(_) | Error::GridMismatch(_) | Error::NonzeroTrace { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Square matrix from nested row lists.
fn square_matrix(rows: Vec<Vec<Complex64>>, what: &str) -> PyResult<DMatrix<Complex64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err(format!("{what} must be a non-empty square list of lists")));
    }
    Ok(DMatrix::from_row_iterator(n, n, rows.into_iter().flatten()))
}

fn nested(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// A trace-class operator sampled as a kernel on a line grid.
#[pyclass(name = "KernelOperator", module = "ncfk", from_py_object)]
#[derive(Clone)]
struct PyKernelOperator {
    inner: ncfk::KernelOperator,
}

#[pymethods]
impl PyKernelOperator {
    /// Kernel from nested lists `K[i][j]` on the grid with spacing `h`
    /// (self-dual spacing when omitted).
    #[new]
    #[pyo3(signature = (kernel, h=None))]
    fn new(kernel: Vec<Vec<Complex64>>, h: Option<f64>) -> PyResult<Self> {
        let k = square_matrix(kernel, "kernel")?;
        let grid = match h {
            Some(h) => LineGrid::explicit(k.nrows(), h),
            None => LineGrid::self_dual(k.nrows()),
        }
        .map_err(to_py)?;
        Ok(PyKernelOperator {
            inner: ncfk::KernelOperator::new(grid, k).map_err(to_py)?,
        })
    }

    /// One of `hermite01`, `gauss-proj`, `random-tracezero`, `zero`.
    #[staticmethod]
    #[pyo3(signature = (name, n=256, seed=0))]
    fn builtin(name: &str, n: usize, seed: u64) -> PyResult<Self> {
        let grid = LineGrid::self_dual(n).map_err(to_py)?;
        Ok(PyKernelOperator {
            inner: builtin_operator(name, &grid, seed).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.grid().n()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.grid().h()
    }

    fn kernel(&self) -> Vec<Vec<Complex64>> {
        nested(self.inner.kernel())
    }

    fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    /// Schatten norm; `p = float("inf")` gives the operator norm.
    fn schatten_norm(&self, p: f64) -> PyResult<f64> {
        let e = SchattenExponent::new(p).map_err(to_py)?;
        Ok(self.inner.schatten_norm(e))
    }

    fn singular_values(&self) -> Vec<f64> {
        self.inner.singular_values().as_slice().to_vec()
    }

    fn alpha(&self) -> PyResult<PyPlaneFunction> {
        Ok(PyPlaneFunction {
            inner: ncfk::alpha::alpha(&self.inner).map_err(to_py)?,
        })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &to_bytes(&NcfkData::Kernel(self.inner.clone())))
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        match from_bytes(data).map_err(to_py)? {
            NcfkData::Kernel(k) => Ok(PyKernelOperator { inner: k }),
            _ => Err(PyValueError::new_err("data does not hold a kernel")),
        }
    }

    fn __repr__(&self) -> String {
        format!("KernelOperator(n={}, h={})", self.n(), self.h())
    }
}

/// A function sampled on a plane grid, indexed `[ix][iy]`.
#[pyclass(name = "PlaneFunction", module = "ncfk", from_py_object)]
#[derive(Clone)]
struct PyPlaneFunction {
    inner: ncfk::PlaneFunction,
}

#[pymethods]
impl PyPlaneFunction {
    /// Samples `values[ix][iy]` on the square self-dual grid.
    #[new]
    fn new(values: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let v = square_matrix(values, "values")?;
        let grid = PlaneGrid::self_dual(v.nrows()).map_err(to_py)?;
        Ok(PyPlaneFunction {
            inner: ncfk::PlaneFunction::new(grid, v).map_err(to_py)?,
        })
    }

    fn values(&self) -> Vec<Vec<Complex64>> {
        nested(self.inner.values())
    }

    fn points(&self) -> Vec<f64> {
        self.inner.grid().x.points()
    }

    fn lp_norm(&self, p: f64) -> f64 {
        self.inner.lp_norm(p)
    }

    fn theta(&self) -> PyResult<PyKernelOperator> {
        Ok(PyKernelOperator {
            inner: ncfk::alpha::theta(&self.inner).map_err(to_py)?,
        })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &to_bytes(&NcfkData::Plane(self.inner.clone())))
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        match from_bytes(data).map_err(to_py)? {
            NcfkData::Plane(p) => Ok(PyPlaneFunction { inner: p }),
            _ => Err(PyValueError::new_err("data does not hold a plane function")),
        }
    }

    fn __repr__(&self) -> String {
        let g = self.inner.grid();
        format!("PlaneFunction(nx={}, ny={})", g.x.n(), g.y.n())
    }
}

/// `q·X` computed through the transform.
#[pyfunction]
fn act(q: &PyPlaneFunction, x: &PyKernelOperator) -> PyResult<PyKernelOperator> {
    Ok(PyKernelOperator {
        inner: act_spectral(&q.inner, &x.inner).map_err(to_py)?.value,
    })
}

/// Sampled Hermite function `φ_k` on the self-dual grid with `n` points.
#[pyfunction]
fn hermite(n: usize, k: usize) -> PyResult<Vec<Complex64>> {
    let grid = LineGrid::self_dual(n).map_err(to_py)?;
    Ok(ncfk::hermite_fn(&grid, k).map_err(to_py)?.values().to_vec())
}

/// Runs a named verification suite and returns its report as JSON.
#[pyfunction]
#[pyo3(signature = (name, n=256, seed=42))]
fn verify(name: &str, n: usize, seed: u64) -> PyResult<String> {
    let r = ncfk::suites::run_suite(name, n, seed).map_err(to_py)?;
    r.to_json().map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Rows `(delta, lp_norm, bound, s1_norm)` of the dyadic decay ladder.
#[pyfunction]
#[pyo3(signature = (x, p=1.5, levels=6))]
fn decay_table(x: &PyKernelOperator, p: f64, levels: usize) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let fam = make_mollifier(&PlaneGrid::square(*x.inner.grid())).map_err(to_py)?;
    let table = decay_ladder(&x.inner, &fam, p, levels).map_err(to_py)?;
    Ok(table.rows.iter().map(|r| (r.delta, r.lp_norm, r.bound, r.s1_norm)).collect())
}

/// `(rho, delta0, final_norm, versal)`; raises `RuntimeError` when the
/// resolvable scales are exhausted.
#[pyfunction]
fn synthesize(x: &PyKernelOperator, eps: f64) -> PyResult<(PyPlaneFunction, f64, f64, f64)> {
    let fam = make_mollifier(&PlaneGrid::square(*x.inner.grid())).map_err(to_py)?;
    let res = find_rho(&x.inner, eps, &fam).map_err(to_py)?;
    Ok((PyPlaneFunction { inner: res.rho }, res.delta0, res.final_norm, fam.versal))
}

#[pymodule]
#[pyo3(name = "ncfk")]
fn ncfk_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKernelOperator>()?;
    m.add_class::<PyPlaneFunction>()?;
    m.add_function(wrap_pyfunction!(act, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(decay_table, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add("SUITES", ncfk::suites::SUITES.to_vec())?;
    Ok(())
}
