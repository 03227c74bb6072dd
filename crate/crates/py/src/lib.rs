//! Python bindings. Shapes are `Partition` objects (or anything accepted by
//! `Partition(...)`), exact rationals cross the boundary as `"p/q"` strings.

use kronpoly::polytope::{format_rational, parse_rational, RationalTriple};
use kronpoly::{KronSet, KronTriple, RowBounds, Spectrum, SpectralTriple};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn py_err(err: kronpoly::Error) -> PyErr {
    match err {
        kronpoly::Error::Consistency(_) | kronpoly::Error::Falsification(_) => {
            PyArithmeticError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

#[pyclass(name = "Partition", module = "kronpoly", frozen, eq, ord, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PyPartition {
    inner: kronpoly::Partition,
}

impl From<kronpoly::Partition> for PyPartition {
    fn from(inner: kronpoly::Partition) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyPartition {
    /// `Partition([4, 2, 1])` or `Partition("4,2,1")`.
    #[new]
    fn new(rows: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(text) = rows.extract::<String>() {
            return text.parse::<kronpoly::Partition>().map(Self::from).map_err(py_err);
        }
        let rows: Vec<u32> = rows.extract()?;
        kronpoly::Partition::new(rows).map(Self::from).map_err(py_err)
    }

    #[getter]
    fn rows(&self) -> Vec<u32> {
        self.inner.rows().to_vec()
    }

    #[getter]
    fn size(&self) -> u32 {
        self.inner.size()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Partition({:?})", self.inner.rows())
    }

    fn __add__(&self, other: &Self) -> Self {
        self.inner.add_rowwise(&other.inner).into()
    }

    fn scale(&self, factor: u32) -> Self {
        self.inner.scale(factor).into()
    }

    fn conjugate(&self) -> Self {
        self.inner.conjugate().into()
    }

    fn hook_lengths(&self) -> Vec<u32> {
        self.inner.hook_lengths()
    }

    /// Row lengths divided by the size, as `"p/q"` strings.
    fn normalize(&self) -> PyResult<Vec<String>> {
        let w = self.inner.normalize().map_err(py_err)?;
        Ok(w.weights().iter().map(format_rational).collect())
    }
}

type Triple = (PyPartition, PyPartition, PyPartition, u64);

fn triple(t: &KronTriple) -> Triple {
    (t.mu.clone().into(), t.nu.clone().into(), t.lambda.clone().into(), t.g)
}

fn bounds(m: usize, n: usize, mn_bound: Option<usize>) -> RowBounds {
    RowBounds::new(m, n, mn_bound.unwrap_or(m * n))
}

#[pyfunction]
#[pyo3(signature = (k, max_rows=None))]
fn enumerate_partitions(k: u32, max_rows: Option<usize>) -> Vec<PyPartition> {
    kronpoly::enumerate_partitions(k, max_rows.unwrap_or(usize::MAX))
        .into_iter()
        .map(PyPartition::from)
        .collect()
}

/// Character of the irreducible `lam` on the class with cycle type `rho`.
#[pyfunction]
fn character(lam: &PyPartition, rho: &PyPartition) -> PyResult<BigInt> {
    kronpoly::character(&lam.inner, &rho.inner).map_err(py_err)
}

#[pyfunction]
fn dim_sk(lam: &PyPartition) -> BigUint {
    kronpoly::dim_sk(&lam.inner)
}

#[pyfunction]
fn dim_gl(lam: &PyPartition, d: u32) -> BigUint {
    kronpoly::dim_gl(&lam.inner, d)
}

#[pyfunction]
fn schur_poly(lam: &PyPartition, x: Vec<f64>) -> PyResult<f64> {
    kronpoly::schur_poly(&lam.inner, &x).map_err(py_err)
}

fn spectrum(r: Vec<f64>) -> PyResult<Spectrum> {
    Spectrum::new(r).map_err(py_err)
}

/// Probability of outcome `lam` when measuring `k` copies of a state with spectrum `r`.
#[pyfunction]
fn schur_weyl_prob(lam: &PyPartition, r: Vec<f64>, k: u32) -> PyResult<f64> {
    kronpoly::schur_weyl_prob(&lam.inner, &spectrum(r)?, k).map_err(py_err)
}

#[pyfunction]
fn estimation_bound(lam: &PyPartition, r: Vec<f64>, k: u32) -> PyResult<f64> {
    kronpoly::estimation_bound(&lam.inner, &spectrum(r)?, k).map_err(py_err)
}

/// Rows `(k, argmax, probability, distance)`.
#[pyfunction]
fn estimation_convergence(r: Vec<f64>, ks: Vec<u32>) -> PyResult<Vec<(u32, PyPartition, f64, f64)>> {
    let table = kronpoly::estimation_convergence(&spectrum(r)?, &ks).map_err(py_err)?;
    Ok(table
        .rows
        .into_iter()
        .map(|row| (row.k, row.argmax.into(), row.probability, row.distance))
        .collect())
}

#[pyfunction]
fn kl_divergence(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    kronpoly::kl_divergence(&p, &q).map_err(py_err)
}

#[pyfunction]
fn kronecker_coefficient(mu: &PyPartition, nu: &PyPartition, lam: &PyPartition) -> PyResult<u64> {
    kronpoly::kronecker_coefficient(&mu.inner, &nu.inner, &lam.inner).map_err(py_err)
}

/// Nonzero triples `(mu, nu, lam, g)` with `k` boxes.
#[pyfunction]
#[pyo3(signature = (k, m=2, n=2, mn_bound=None))]
fn enumerate_kron(k: u32, m: usize, n: usize, mn_bound: Option<usize>) -> PyResult<Vec<Triple>> {
    let set = kronpoly::enumerate_kron(k, bounds(m, n, mn_bound)).map_err(py_err)?;
    Ok(set.triples.iter().map(triple).collect())
}

/// Indecomposable triples among all nonzero triples up to `max_boxes`.
#[pyfunction]
#[pyo3(signature = (max_boxes, m=2, n=2, mn_bound=None))]
fn generators(max_boxes: u32, m: usize, n: usize, mn_bound: Option<usize>) -> PyResult<Vec<Triple>> {
    let set = kronpoly::enumerate_kron_up_to(max_boxes, bounds(m, n, mn_bound)).map_err(py_err)?;
    Ok(kronpoly::extract_generators(&set).iter().map(triple).collect())
}

type Spectra = (Vec<f64>, Vec<f64>, Vec<f64>);

fn spectra_of(t: &SpectralTriple) -> Spectra {
    (t.a.probs().to_vec(), t.b.probs().to_vec(), t.ab.probs().to_vec())
}

/// Marginal and joint spectra of a Hilbert–Schmidt random state on `C^m ⊗ C^n`.
#[pyfunction]
#[pyo3(signature = (m, n, seed=0))]
fn random_spectral_triple(m: usize, n: usize, seed: u64) -> PyResult<Spectra> {
    let rho = kronpoly::random_density(m * n, seed);
    Ok(spectra_of(&kronpoly::spectral_triple(&rho, m, n).map_err(py_err)?))
}

fn spectral_triple(a: Vec<f64>, b: Vec<f64>, ab: Vec<f64>) -> PyResult<SpectralTriple> {
    SpectralTriple::new(spectrum(a)?, spectrum(b)?, spectrum(ab)?).map_err(py_err)
}

/// Searches for a state with the given spectra. Returns `(error, restarts_used, rho)`.
#[pyfunction]
#[pyo3(signature = (a, b, ab, restarts=200, seed=0))]
fn find_witness_state(
    a: Vec<f64>,
    b: Vec<f64>,
    ab: Vec<f64>,
    restarts: usize,
    seed: u64,
) -> PyResult<(f64, usize, Vec<Vec<Complex64>>)> {
    let (m, n) = (a.len(), b.len());
    let target = spectral_triple(a, b, ab)?;
    let opts = kronpoly::WitnessSearch {
        restarts,
        seed,
        ..Default::default()
    };
    let w = kronpoly::find_witness_state(&target, m, n, &opts).map_err(py_err)?;
    let mat = w.rho.matrix();
    let rows = (0..mat.nrows()).map(|i| mat.row(i).iter().copied().collect()).collect();
    Ok((w.error, w.restarts_used, rows))
}

fn rationals(values: &[String]) -> PyResult<Vec<BigRational>> {
    values.iter().map(|s| parse_rational(s).map_err(py_err)).collect()
}

fn rational_triple(a: Vec<String>, b: Vec<String>, ab: Vec<String>) -> PyResult<RationalTriple> {
    RationalTriple::new(rationals(&a)?, rationals(&b)?, rationals(&ab)?).map_err(py_err)
}

#[pyclass(name = "Polytope", module = "kronpoly", frozen)]
pub struct PyPolytope {
    inner: kronpoly::PolytopeV,
}

#[pymethods]
impl PyPolytope {
    /// Hull of all normalized nonzero triples up to `max_boxes`.
    #[staticmethod]
    #[pyo3(signature = (max_boxes, m=2, n=2, mn_bound=None))]
    fn build(max_boxes: u32, m: usize, n: usize, mn_bound: Option<usize>) -> PyResult<Self> {
        let set: KronSet = kronpoly::enumerate_kron_up_to(max_boxes, bounds(m, n, mn_bound)).map_err(py_err)?;
        let inner = kronpoly::build_polytope(&set).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = kronpoly::PolytopeV::from_json(text).map_err(py_err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn affine_dim(&self) -> usize {
        self.inner.affine_dim()
    }

    #[getter]
    fn max_boxes(&self) -> u32 {
        self.inner.source_max_boxes()
    }

    fn vertices(&self) -> Vec<Vec<String>> {
        self.inner
            .vertices()
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect()
    }

    /// `(inside, L1 distance)` for floating-point spectra.
    fn membership(&self, a: Vec<f64>, b: Vec<f64>, ab: Vec<f64>) -> PyResult<(bool, f64)> {
        let m = self.inner.membership(&spectral_triple(a, b, ab)?).map_err(py_err)?;
        Ok((m.inside, m.distance))
    }

    /// Exact membership for `"p/q"` coordinates; the distance is a `"p/q"` string.
    fn membership_exact(&self, a: Vec<String>, b: Vec<String>, ab: Vec<String>) -> PyResult<(bool, String)> {
        let (inside, dist) = self.inner.membership_exact(&rational_triple(a, b, ab)?).map_err(py_err)?;
        Ok((inside, format_rational(&dist)))
    }

    /// Pairs `(coefficient, vertex)` summing exactly to the point.
    fn caratheodory(&self, a: Vec<String>, b: Vec<String>, ab: Vec<String>) -> PyResult<Vec<(String, Vec<String>)>> {
        let cert = self.inner.caratheodory(&rational_triple(a, b, ab)?).map_err(py_err)?;
        Ok(cert
            .coefficients
            .iter()
            .zip(&cert.generators)
            .map(|(x, v)| (format_rational(x), v.coords.iter().map(format_rational).collect()))
            .collect())
    }

    /// Smallest `m ≤ max_m` with `m·p` a nonzero triple, as `(m, triple)`.
    #[pyo3(signature = (a, b, ab, max_m=64))]
    fn find_scaling(
        &self,
        a: Vec<String>,
        b: Vec<String>,
        ab: Vec<String>,
        max_m: u32,
    ) -> PyResult<Option<(u32, Triple)>> {
        let p = rational_triple(a, b, ab)?;
        let cert = self.inner.caratheodory(&p).map_err(py_err)?;
        let found = kronpoly::find_scaling(&p, &cert, max_m).map_err(py_err)?;
        Ok(found.map(|(m, t)| (m, triple(&t))))
    }
}

#[pymodule]
#[pyo3(name = "kronpoly")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartition>()?;
    m.add_class::<PyPolytope>()?;
    m.add_function(wrap_pyfunction!(enumerate_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(character, m)?)?;
    m.add_function(wrap_pyfunction!(dim_sk, m)?)?;
    m.add_function(wrap_pyfunction!(dim_gl, m)?)?;
    m.add_function(wrap_pyfunction!(schur_poly, m)?)?;
    m.add_function(wrap_pyfunction!(schur_weyl_prob, m)?)?;
    m.add_function(wrap_pyfunction!(estimation_bound, m)?)?;
    m.add_function(wrap_pyfunction!(estimation_convergence, m)?)?;
    m.add_function(wrap_pyfunction!(kl_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_kron, m)?)?;
    m.add_function(wrap_pyfunction!(generators, m)?)?;
    m.add_function(wrap_pyfunction!(random_spectral_triple, m)?)?;
    m.add_function(wrap_pyfunction!(find_witness_state, m)?)?;
    Ok(())
}
