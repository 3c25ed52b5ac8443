use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use dyndtw::intermediary::recover_answer;
use dyndtw::io::parse_instance;
use dyndtw::{Curve, CurveEdit, DynamicDtw, Error, Exact, Float, Metric, Point, Scalar, Side};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Index { .. } => PyIndexError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn metric(name: &str) -> PyResult<Metric> {
    name.parse().map_err(py_err)
}

fn side(name: &str) -> PyResult<Side> {
    match name {
        "P" | "p" => Ok(Side::P),
        "Q" | "q" => Ok(Side::Q),
        _ => Err(PyValueError::new_err(format!("side must be 'P' or 'Q', got {name:?}"))),
    }
}

fn coord<S: Scalar>(obj: &Bound<'_, PyAny>) -> PyResult<S> {
    if let Ok(s) = obj.extract::<String>() {
        return S::parse_str(&s).map_err(py_err);
    }
    if let Ok(i) = obj.extract::<i64>() {
        return Ok(S::from_i64(i));
    }
    let f: f64 = obj.extract()?;
    if S::EXACT {
        return Err(PyValueError::new_err("exact mode takes integers or rational strings"));
    }
    S::parse_str(&f.to_string()).map_err(py_err)
}

/// A point is a number, a string, or a sequence of those.
fn point<S: Scalar>(obj: &Bound<'_, PyAny>) -> PyResult<Point<S>> {
    if obj.extract::<String>().is_err() {
        if let Ok(items) = obj.extract::<Vec<Bound<'_, PyAny>>>() {
            return Point::new(items.iter().map(coord).collect::<PyResult<_>>()?).map_err(py_err);
        }
    }
    Ok(Point::scalar(coord(obj)?))
}

fn curve<S: Scalar>(obj: &Bound<'_, PyAny>) -> PyResult<Curve<S>> {
    let items: Vec<Bound<'_, PyAny>> = obj.extract()?;
    Curve::new(items.iter().map(point).collect::<PyResult<_>>()?).map_err(py_err)
}

/// DTW of two float curves.
#[pyfunction]
#[pyo3(signature = (p, q, metric="l1"))]
fn dtw(p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>, metric: &str) -> PyResult<f64> {
    let (p, q) = (curve::<Float>(p)?, curve::<Float>(q)?);
    dyndtw::dtw(&p, &q, &self::metric(metric)?).map(|v| v.get()).map_err(py_err)
}

/// DTW in exact rational arithmetic, returned as a string such as "7/2".
#[pyfunction]
#[pyo3(signature = (p, q, metric="l1"))]
fn dtw_exact(p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>, metric: &str) -> PyResult<String> {
    let (p, q) = (curve::<Exact>(p)?, curve::<Exact>(q)?);
    dyndtw::dtw(&p, &q, &self::metric(metric)?).map(|v| v.to_string()).map_err(py_err)
}

/// Shortest path value of an Intermediary instance given as JSON; "inf"
/// when no cheap path exists.
#[pyfunction]
fn intermediary_solve(instance_json: &str) -> PyResult<String> {
    Ok(parse_instance(instance_json).map_err(py_err)?.solve_direct().to_string())
}

/// Gadget curves of an instance as two lists of rational strings.
#[pyfunction]
fn reduction_curves(instance_json: &str) -> PyResult<(Vec<String>, Vec<String>)> {
    let c = parse_instance(instance_json).map_err(py_err)?.build_curves();
    let text = |cv: &Curve<Exact>| cv.points().iter().map(|p| p.coords()[0].to_string()).collect();
    Ok((text(&c.p), text(&c.q)))
}

/// Instance answer recovered from the DTW value of its gadget curves.
#[pyfunction]
fn recover(dtw_value: &str, instance_json: &str) -> PyResult<String> {
    let inst = parse_instance(instance_json).map_err(py_err)?;
    let v = Exact::parse_str(dtw_value).map_err(py_err)?;
    recover_answer(&v, &inst).map(|d| d.to_string()).map_err(py_err)
}

enum Inner {
    Float(DynamicDtw<Float>),
    Exact(DynamicDtw<Exact>),
}

/// DTW maintained under point edits. Indices are 1-based.
#[pyclass(name = "DynamicDTW", unsendable)]
struct PyDynamicDtw {
    inner: Inner,
}

#[pymethods]
impl PyDynamicDtw {
    #[new]
    #[pyo3(signature = (p, q, beta=0.5, metric="l1", exact=false))]
    fn new(p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>, beta: f64, metric: &str, exact: bool) -> PyResult<Self> {
        let m = self::metric(metric)?;
        let inner = if exact {
            Inner::Exact(DynamicDtw::new(curve(p)?, curve(q)?, m, beta).map_err(py_err)?)
        } else {
            Inner::Float(DynamicDtw::new(curve(p)?, curve(q)?, m, beta).map_err(py_err)?)
        };
        Ok(PyDynamicDtw { inner })
    }

    fn insert(&mut self, side: &str, index: usize, x: &Bound<'_, PyAny>) -> PyResult<()> {
        let s = self::side(side)?;
        match &mut self.inner {
            Inner::Float(d) => d.update(CurveEdit::insert(s, index, point(x)?)).map(drop),
            Inner::Exact(d) => d.update(CurveEdit::insert(s, index, point(x)?)).map(drop),
        }
        .map_err(py_err)
    }

    fn delete(&mut self, side: &str, index: usize) -> PyResult<()> {
        let s = self::side(side)?;
        match &mut self.inner {
            Inner::Float(d) => d.update(CurveEdit::delete(s, index)).map(drop),
            Inner::Exact(d) => d.update(CurveEdit::delete(s, index)).map(drop),
        }
        .map_err(py_err)
    }

    fn substitute(&mut self, side: &str, index: usize, x: &Bound<'_, PyAny>) -> PyResult<()> {
        let s = self::side(side)?;
        match &mut self.inner {
            Inner::Float(d) => d.update(CurveEdit::substitute(s, index, point(x)?)).map(drop),
            Inner::Exact(d) => d.update(CurveEdit::substitute(s, index, point(x)?)).map(drop),
        }
        .map_err(py_err)
    }

    /// Current DTW value: a float, or a rational string in exact mode.
    fn query(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        Ok(match &self.inner {
            Inner::Float(d) => d.query().get().into_pyobject(py)?.into_any().unbind(),
            Inner::Exact(d) => d.query().to_string().into_pyobject(py)?.into_any().unbind(),
        })
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        match &self.inner {
            Inner::Float(d) => (d.p().len(), d.q().len()),
            Inner::Exact(d) => (d.p().len(), d.q().len()),
        }
    }
}

#[pymodule]
fn dyndtw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dtw, m)?)?;
    m.add_function(wrap_pyfunction!(dtw_exact, m)?)?;
    m.add_function(wrap_pyfunction!(intermediary_solve, m)?)?;
    m.add_function(wrap_pyfunction!(reduction_curves, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_class::<PyDynamicDtw>()?;
    Ok(())
}
