//! Python module `fracline`.

use std::fmt::Display;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fracline::hull::hull_pair;
use fracline::ifs::{points_at_level, similarity_dimension};
use fracline::intersect::{chain_certify_with, hyperdense_directional_test_with};
use fracline::{fixtures, Address, Contraction, Ifs, IfsDocument, Line, Mat2, OpenRegion, Point2, Region, Verdict};

create_exception!(fracline, FraclineError, PyValueError);

fn err(e: impl Display) -> PyErr {
    FraclineError::new_err(e.to_string())
}

fn line_of((a, b, c): (f64, f64, f64)) -> PyResult<Line> {
    Line::new(a, b, c).map_err(err)
}

fn address_of(s: &str) -> PyResult<Address> {
    s.parse().map_err(err)
}

fn pair(p: Point2) -> (f64, f64) {
    (p.x, p.y)
}

/// A validated iterated function system.
#[pyclass(name = "Ifs", module = "fracline", frozen)]
struct PyIfs {
    inner: Ifs,
}

impl PyIfs {
    fn seed(&self, seed: Option<(f64, f64)>) -> Point2 {
        seed.map_or(self.inner.fixed_points()[0], |(x, y)| Point2::new(x, y))
    }
}

#[pymethods]
impl PyIfs {
    /// Parses the TOML document format.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let doc = IfsDocument::parse(text).map_err(err)?;
        Ok(Self { inner: doc.build().map_err(err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(err)?;
        Self::from_toml(&text)
    }

    /// Similitudes given as `(fx, fy, lambda, theta)`.
    #[staticmethod]
    #[pyo3(signature = (maps, weights=None))]
    fn similitudes(maps: Vec<(f64, f64, f64, f64)>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let maps = maps
            .into_iter()
            .map(|(x, y, l, t)| Contraction::similitude(Point2::new(x, y), l, t))
            .collect();
        Ok(Self { inner: Ifs::new(maps, weights).map_err(err)? })
    }

    /// Affine maps given as `(fx, fy, a, b, c, d)` with `M = [[a, b], [c, d]]`.
    #[staticmethod]
    #[pyo3(signature = (maps, weights=None))]
    fn affine(maps: Vec<(f64, f64, f64, f64, f64, f64)>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let maps = maps
            .into_iter()
            .map(|(x, y, a, b, c, d)| Contraction::affine(Point2::new(x, y), Mat2::new(a, b, c, d)))
            .collect();
        Ok(Self { inner: Ifs::new(maps, weights).map_err(err)? })
    }

    #[staticmethod]
    fn sierpinski() -> Self {
        Self { inner: fixtures::sierpinski() }
    }

    #[staticmethod]
    fn cantor_pair() -> Self {
        Self { inner: fixtures::cantor_pair() }
    }

    #[staticmethod]
    fn spiral_pair() -> Self {
        Self { inner: fixtures::spiral_pair() }
    }

    #[staticmethod]
    fn quarter_turn_pair() -> Self {
        Self { inner: fixtures::quarter_turn_pair() }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Ifs(maps={}, weights={:?})", self.inner.len(), self.inner.weights())
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn fixed_points(&self) -> Vec<(f64, f64)> {
        self.inner.fixed_points().into_iter().map(pair).collect()
    }

    #[getter]
    fn norms(&self) -> Vec<f64> {
        self.inner.maps().iter().map(|m| m.norm()).collect()
    }

    fn dimension(&self) -> PyResult<f64> {
        Ok(similarity_dimension(&self.inner).map_err(err)?.value)
    }

    #[pyo3(signature = (name=None))]
    fn dump(&self, name: Option<&str>) -> String {
        fracline::dump_normalized(&self.inner, name)
    }

    /// `(address, x, y)` for every address of length `level`.
    #[pyo3(signature = (level, seed=None))]
    fn points(&self, level: usize, seed: Option<(f64, f64)>) -> PyResult<Vec<(String, f64, f64)>> {
        let pts = points_at_level(&self.inner, self.seed(seed), level).map_err(err)?;
        Ok(pts.into_iter().map(|(a, p)| (a.to_string(), p.x, p.y)).collect())
    }
}

/// Inner and outer hull bounds at level `level`.
#[pyfunction]
#[pyo3(signature = (ifs, level=8))]
fn hulls<'py>(py: Python<'py>, ifs: &PyIfs, level: usize) -> PyResult<Bound<'py, PyDict>> {
    let hp = hull_pair(&ifs.inner, level);
    let d = PyDict::new(py);
    d.set_item("outer", hp.outer.vertices().iter().map(|&p| pair(p)).collect::<Vec<_>>())?;
    d.set_item("inner", hp.inner.vertices().iter().map(|&p| pair(p)).collect::<Vec<_>>())?;
    d.set_item("error_bound", hp.error_bound)?;
    d.set_item("measured_gap", hp.measured_gap)?;
    Ok(d)
}

/// `("chain" | "not-hyperdense" | "indeterminate", witness (a, b, c) or None)`.
#[pyfunction]
#[pyo3(signature = (ifs, level=8, directions=64))]
fn classify(ifs: &PyIfs, level: usize, directions: usize) -> PyResult<(String, Option<(f64, f64, f64)>)> {
    let hp = hull_pair(&ifs.inner, level);
    let mut verdict = chain_certify_with(&ifs.inner, &hp);
    if !verdict.is_certified() {
        verdict = hyperdense_directional_test_with(&ifs.inner, &hp, directions).map_err(err)?;
    }
    Ok(match verdict {
        Verdict::CertifiedChain => ("chain".into(), None),
        Verdict::CertifiedNotHyperdense { witness } => ("not-hyperdense".into(), Some(witness.coefficients())),
        Verdict::Indeterminate(_) => ("indeterminate".into(), None),
    })
}

/// Cover of the intersection with the line `a x + b y = c`.
#[pyfunction]
#[pyo3(signature = (ifs, line, eps=1e-3, level=8))]
fn intersect<'py>(
    py: Python<'py>,
    ifs: &PyIfs,
    line: (f64, f64, f64),
    eps: f64,
    level: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let hp = hull_pair(&ifs.inner, level);
    let cover = fracline::line_intersect(&ifs.inner, &hp, &line_of(line)?, eps).map_err(err)?;
    let d = PyDict::new(py);
    let pieces: Vec<(f64, f64, String)> =
        cover.pieces.iter().map(|p| (p.interval.lo, p.interval.hi, p.address.to_string())).collect();
    let intervals: Vec<(f64, f64)> = cover.interval_set().intervals().iter().map(|i| (i.lo, i.hi)).collect();
    d.set_item("pieces", pieces)?;
    d.set_item("intervals", intervals)?;
    d.set_item("total_length", cover.total_length())?;
    d.set_item("nodes_expanded", cover.nodes_expanded)?;
    Ok(d)
}

/// Level-`level` mass of a region given in the CLI region grammar.
#[pyfunction]
#[pyo3(signature = (ifs, region, level=8, seed=None))]
fn measure(ifs: &PyIfs, region: &str, level: usize, seed: Option<(f64, f64)>) -> PyResult<f64> {
    let region: Region = region.parse().map_err(err)?;
    fracline::nu_level(&ifs.inner, level, &region, ifs.seed(seed)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (ifs, region, level, seed=None))]
fn invariance_residual(ifs: &PyIfs, region: &str, level: usize, seed: Option<(f64, f64)>) -> PyResult<f64> {
    let region: Region = region.parse().map_err(err)?;
    fracline::invariance_residual(&ifs.inner, level, &region, ifs.seed(seed)).map_err(err)
}

/// `(spacing, [(offset, mass), ...])`.
#[pyfunction]
#[pyo3(signature = (ifs, theta, level, seed=None))]
fn shadow(ifs: &PyIfs, theta: f64, level: usize, seed: Option<(f64, f64)>) -> PyResult<(f64, Vec<(f64, f64)>)> {
    let prof = fracline::shadow_profile(&ifs.inner, theta, level, ifs.seed(seed)).map_err(err)?;
    Ok((prof.spacing, prof.rays.iter().map(|r| (r.offset, r.mass)).collect()))
}

#[pyfunction]
fn proliferate_disk(
    ifs: &PyIfs,
    address: &str,
    center: (f64, f64),
    radius: f64,
    count: usize,
) -> PyResult<Vec<(f64, f64)>> {
    let region = OpenRegion::Disk { center: Point2::new(center.0, center.1), radius };
    let pts = fracline::proliferate(&ifs.inner, &address_of(address)?, &region, count).map_err(err)?;
    Ok(pts.into_iter().map(pair).collect())
}

#[pyfunction]
fn proliferate_slab(
    ifs: &PyIfs,
    address: &str,
    line: (f64, f64, f64),
    half_width: f64,
    count: usize,
) -> PyResult<Vec<(f64, f64)>> {
    let region = OpenRegion::Slab { line: line_of(line)?, half_width };
    let pts = fracline::proliferate(&ifs.inner, &address_of(address)?, &region, count).map_err(err)?;
    Ok(pts.into_iter().map(pair).collect())
}

/// `[(k, x, y, angle), ...]`.
#[pyfunction]
#[pyo3(signature = (ifs, line, eps, count=1, map=1, address="0"))]
fn angular_hits(
    ifs: &PyIfs,
    line: (f64, f64, f64),
    eps: f64,
    count: usize,
    map: usize,
    address: &str,
) -> PyResult<Vec<(u64, f64, f64, f64)>> {
    let hits = fracline::angular_hits(&ifs.inner, map, &address_of(address)?, &line_of(line)?, eps, count)
        .map_err(err)?;
    Ok(hits.into_iter().map(|h| (h.k, h.point.x, h.point.y, h.angle)).collect())
}

#[pymodule]
#[pyo3(name = "fracline")]
fn fracline_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FraclineError", m.py().get_type::<FraclineError>())?;
    m.add_class::<PyIfs>()?;
    m.add_function(wrap_pyfunction!(hulls, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(intersect, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(invariance_residual, m)?)?;
    m.add_function(wrap_pyfunction!(shadow, m)?)?;
    m.add_function(wrap_pyfunction!(proliferate_disk, m)?)?;
    m.add_function(wrap_pyfunction!(proliferate_slab, m)?)?;
    m.add_function(wrap_pyfunction!(angular_hits, m)?)?;
    Ok(())
}
