//! Python bindings for the `surface-lcs` engine.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use surface_lcs::cli::{self, RunConfig, Suite};
use surface_lcs::int_linalg::{self, IntMatrix};
use surface_lcs::nilpotent_group::{self as nil, GroupWord};
use surface_lcs::sp_rep::{self, ExtVector, SymplecticSpace};
use surface_lcs::surface_lie;
use surface_lcs::torelli_h1::{PullbackGroup, PullbackKind};
use surface_lcs::{enveloping, free_lie, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ResourceBound(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn matrix(rows: Vec<Vec<BigInt>>, cols: Option<usize>) -> PyResult<IntMatrix> {
    let cols = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    IntMatrix::from_rows(rows, cols).map_err(to_py)
}

/// Graded quotient `L(H)/(ω)` truncated at `max_degree`.
#[pyclass(name = "SurfaceAlgebra", module = "surface_lcs", frozen)]
struct PySurfaceAlgebra {
    inner: surface_lie::SurfaceAlgebra,
}

#[pymethods]
impl PySurfaceAlgebra {
    #[new]
    fn new(py: Python<'_>, genus: usize, max_degree: usize) -> PyResult<Self> {
        let inner = py
            .detach(|| surface_lie::SurfaceAlgebra::build(genus, max_degree))
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    /// Ranks of the graded pieces, degree 1 first.
    fn ranks(&self) -> Vec<usize> {
        self.inner.ranks()
    }

    fn rank(&self, degree: usize) -> PyResult<usize> {
        self.inner.rank(degree).map_err(to_py)
    }

    fn is_free(&self) -> bool {
        self.inner.is_free()
    }

    fn hilbert_identity_holds(&self) -> bool {
        self.inner.hilbert_identity_holds()
    }

    /// Basis of the center in one degree, as strings.
    fn center_in_degree(&self, py: Python<'_>, degree: usize) -> PyResult<Vec<String>> {
        let c = py.detach(|| self.inner.center_in_degree(degree)).map_err(to_py)?;
        Ok(c.iter().map(ToString::to_string).collect())
    }

    /// `[(degree, rank, center_rank), ...]` for every degree.
    fn center_report(&self, py: Python<'_>) -> PyResult<Vec<(usize, usize, usize)>> {
        let r = py.detach(|| self.inner.verify_center_theorem()).map_err(to_py)?;
        Ok(r.degrees.iter().map(|d| (d.degree, d.rank, d.center_rank)).collect())
    }

    fn __repr__(&self) -> String {
        format!("SurfaceAlgebra(genus={}, max_degree={})", self.inner.genus(), self.inner.max_degree())
    }
}

/// Reduced word in `a1, b1, ..., ag, bg` and their inverses.
#[pyclass(name = "Word", module = "surface_lcs", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord {
    inner: GroupWord,
}

#[pymethods]
impl PyWord {
    /// Parses `"a1 b1 a1^-1 b1^-1"`; capital letters are inverses and `"1"` is the identity.
    #[new]
    #[pyo3(signature = (text = "1"))]
    fn new(text: &str) -> PyResult<Self> {
        GroupWord::parse(text).map(|inner| Self { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn relator(genus: usize) -> Self {
        Self { inner: GroupWord::surface_relator(genus) }
    }

    #[staticmethod]
    fn commutator(x: &PyWord, y: &PyWord) -> Self {
        Self { inner: GroupWord::commutator(&x.inner, &y.inner) }
    }

    fn inverse(&self) -> Self {
        Self { inner: self.inner.inverse() }
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn __mul__(&self, other: &PyWord) -> Self {
        Self { inner: self.inner.mul(&other.inner) }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?})", self.inner.to_string())
    }
}

#[pyfunction]
fn witt_dimension(generators: usize, degree: usize) -> BigInt {
    free_lie::witt_dimension(generators, degree)
}

/// Lyndon words of a given length on `generators` letters, as letter-index lists.
#[pyfunction]
fn lyndon_words(generators: usize, length: usize) -> Vec<Vec<u8>> {
    free_lie::lyndon_words(generators, length)
}

/// Coefficients of `1/(1 - 2g t + t^2)` up to `t^k`.
#[pyfunction]
fn hilbert_series(genus: usize, k: usize) -> Vec<BigInt> {
    surface_lie::surface_hilbert_series(genus, k)
}

/// Dimension of degree `d` of the enveloping algebra, counted by reduced words.
#[pyfunction]
fn enveloping_dimension(genus: usize, degree: usize) -> BigInt {
    enveloping::hilbert_dimension(genus, degree)
}

/// Truncated Magnus expansion of a word in `π/γ_{k+1}`.
#[pyfunction]
fn magnus_expand(genus: usize, word: &PyWord, k: usize) -> PyResult<String> {
    nil::expand(genus, &word.inner, k).map(|s| s.to_string()).map_err(to_py)
}

#[pyfunction]
fn equal_in_quotient(genus: usize, u: &PyWord, v: &PyWord, k: usize) -> PyResult<bool> {
    nil::equal_in_quotient(genus, &u.inner, &v.inner, k).map_err(to_py)
}

#[pyfunction]
fn commutator_layer_rank(py: Python<'_>, genus: usize, k: usize) -> PyResult<usize> {
    py.detach(|| nil::commutator_layer_rank(genus, k)).map_err(to_py)
}

/// Per-layer verdicts for the center of `π/γ_{k+1}`.
#[pyfunction]
fn center_of_quotient<'py>(py: Python<'py>, genus: usize, k: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let report = py.detach(|| nil::center_of_quotient(genus, k)).map_err(to_py)?;
    report
        .layers
        .iter()
        .map(|l| {
            let d = PyDict::new(py);
            d.set_item("layer", l.layer)?;
            d.set_item("rank", l.rank)?;
            d.set_item("spanning", l.spanning)?;
            d.set_item("central", l.central)?;
            Ok(d)
        })
        .collect()
}

/// Checks the commutator expansion of `[p·g, n]` by free reduction.
#[pyfunction]
fn verify_identity_viii(p: &PyWord, g: &PyWord, n: &PyWord) -> bool {
    nil::verify_identity_viii(&p.inner, &g.inner, &n.inner)
}

#[pyfunction]
fn sp_generator_count(genus: usize) -> PyResult<usize> {
    sp_rep::sp_generators(genus).map(|g| g.len()).map_err(to_py)
}

/// Rows span the image of the Johnson homomorphism in `Λ³H`.
#[pyfunction]
fn johnson_image(genus: usize) -> PyResult<Vec<Vec<BigInt>>> {
    sp_rep::johnson_image(genus).map(|m| m.to_rows()).map_err(to_py)
}

/// Labels of the `Λ³H` basis, in coordinate order.
#[pyfunction]
fn wedge_basis(genus: usize) -> PyResult<Vec<String>> {
    let space = SymplecticSpace::new(genus).map_err(to_py)?;
    let labels = space.labels();
    Ok(space
        .triples()
        .iter()
        .map(|t| format!("{}∧{}∧{}", labels[t[0]], labels[t[1]], labels[t[2]]))
        .collect())
}

/// Contraction `Λ³H → H` applied to a coordinate vector.
#[pyfunction]
fn contraction(genus: usize, coords: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
    let space = SymplecticSpace::new(genus).map_err(to_py)?;
    let v = ExtVector::from_coords(space, coords).map_err(to_py)?;
    Ok(sp_rep::contraction(&v))
}

#[pyfunction]
fn commutant_dimension(py: Python<'_>, genus: usize) -> PyResult<usize> {
    py.detach(|| sp_rep::commutant_dimension(genus)).map_err(to_py)
}

/// Invariant factors of an integer matrix.
#[pyfunction]
fn smith_invariants(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<BigInt>> {
    let snf = int_linalg::snf(&matrix(rows, None)?);
    Ok(snf.d)
}

#[pyfunction]
fn is_direct_summand(rows: Vec<Vec<BigInt>>, ambient_rank: usize) -> PyResult<bool> {
    int_linalg::is_direct_summand(&matrix(rows, Some(ambient_rank))?, ambient_rank).map_err(to_py)
}

/// Basis of the saturation of the row span.
#[pyfunction]
fn saturate(rows: Vec<Vec<BigInt>>, ambient_rank: usize) -> PyResult<Vec<Vec<BigInt>>> {
    int_linalg::saturate(&matrix(rows, Some(ambient_rank))?, ambient_rank)
        .map(|m| m.to_rows())
        .map_err(to_py)
}

/// `(free_rank, torsion)` of the pullback group; `kind` is `"d1"` or `"d3"`.
#[pyfunction]
#[pyo3(signature = (genus, kind, include_constant = true))]
fn pullback_invariants(py: Python<'_>, genus: usize, kind: &str, include_constant: bool) -> PyResult<(usize, Vec<BigInt>)> {
    let kind = match kind.to_ascii_lowercase().as_str() {
        "d1" => PullbackKind::D1,
        "d3" => PullbackKind::D3,
        other => return Err(PyValueError::new_err(format!("unknown pullback kind {other:?}"))),
    };
    let g = py.detach(|| PullbackGroup::build(genus, kind, include_constant)).map_err(to_py)?;
    let inv = g.invariants();
    Ok((inv.free_rank, inv.torsion.clone()))
}

#[pyfunction]
fn euler_index(chi_sub: i64, chi_ambient: i64) -> PyResult<i64> {
    cli::euler_index(chi_sub, chi_ambient).map_err(to_py)
}

/// Runs the verification suites and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (genus = 3, max_degree = 4, suites = None, seed = 0, trials = 1000))]
fn run_report(
    py: Python<'_>,
    genus: usize,
    max_degree: usize,
    suites: Option<Vec<String>>,
    seed: u64,
    trials: usize,
) -> PyResult<String> {
    let suites = match suites {
        Some(names) => names.iter().map(|s| s.parse::<Suite>()).collect::<Result<Vec<_>, _>>().map_err(to_py)?,
        None => Suite::ALL.to_vec(),
    };
    let config = RunConfig { genus, max_degree, suites, seed, trials, ..RunConfig::default() };
    let report = py.detach(|| cli::run(&config)).map_err(to_py)?;
    Ok(report.to_json())
}

#[pymodule]
#[pyo3(name = "surface_lcs")]
fn surface_lcs_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySurfaceAlgebra>()?;
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(witt_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(lyndon_words, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_series, m)?)?;
    m.add_function(wrap_pyfunction!(enveloping_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(magnus_expand, m)?)?;
    m.add_function(wrap_pyfunction!(equal_in_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_layer_rank, m)?)?;
    m.add_function(wrap_pyfunction!(center_of_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity_viii, m)?)?;
    m.add_function(wrap_pyfunction!(sp_generator_count, m)?)?;
    m.add_function(wrap_pyfunction!(johnson_image, m)?)?;
    m.add_function(wrap_pyfunction!(wedge_basis, m)?)?;
    m.add_function(wrap_pyfunction!(contraction, m)?)?;
    m.add_function(wrap_pyfunction!(commutant_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(smith_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(is_direct_summand, m)?)?;
    m.add_function(wrap_pyfunction!(saturate, m)?)?;
    m.add_function(wrap_pyfunction!(pullback_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(euler_index, m)?)?;
    m.add_function(wrap_pyfunction!(run_report, m)?)?;
    Ok(())
}
