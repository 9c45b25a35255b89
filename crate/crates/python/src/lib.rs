//! Python bindings: graphs, the H-product, the coupled-block engine and the
//! structured spectra, plus the dense oracle for cross-checking.

use hspec_core::fiedler::{
    coupled_eigenpairs as engine_pairs, coupled_spectrum as engine_spectrum,
};
use hspec_core::graphs::{self, UniversalParams};
use hspec_core::linalg::{self, COMMUTE_TOL};
use hspec_core::spectra::{self, dense_oracle_spectrum, HProductJob, MatrixKind, SpectrumReport};
use hspec_core::{CouplingSpec, Error, FiedlerInput, Graph, SymMatrix};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    hspec,
    HspecError,
    PyValueError,
    "Raised for invalid input or unmet hypotheses."
);

fn err(e: Error) -> PyErr {
    HspecError::new_err(format!("{}: {e}", e.kind()))
}

fn sym(rows: &[Vec<f64>]) -> PyResult<SymMatrix> {
    SymMatrix::from_rows(rows).map_err(err)
}

type Vectors = Vec<Vec<f64>>;

fn columns(m: &nalgebra::DMatrix<f64>) -> Vectors {
    m.column_iter()
        .map(|c| c.iter().copied().collect())
        .collect()
}

#[pyclass(name = "Graph", module = "hspec", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGraph {
    inner: Graph,
}

impl From<Graph> for PyGraph {
    fn from(inner: Graph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    /// Graph on `order` vertices with the given `(u, v)` edges.
    #[new]
    fn new(order: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Graph::from_edge_pairs(order, &edges)
            .map(Into::into)
            .map_err(err)
    }

    #[staticmethod]
    fn empty(n: usize) -> PyResult<Self> {
        graphs::empty(n).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn complete(n: usize) -> PyResult<Self> {
        graphs::complete(n).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        graphs::path(n).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        graphs::cycle(n).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn circulant(n: usize, steps: Vec<usize>) -> PyResult<Self> {
        graphs::circulant(n, &steps).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn cayley_z2k(k: u32, connections: Vec<u64>) -> PyResult<Self> {
        graphs::cayley_z2k(k, &connections)
            .map(Into::into)
            .map_err(err)
    }

    /// Parses the plain edge-list format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        graphs::parse_edge_list(text).map(Into::into).map_err(err)
    }

    fn to_edge_list(&self) -> String {
        graphs::to_edge_list(&self.inner)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.order() {
            return Err(err(Error::IndexOutOfRange {
                index: v,
                max: self.inner.order(),
            }));
        }
        Ok(self.inner.degree(v))
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    /// The common degree, or `None` if the graph is not regular.
    fn regularity(&self) -> Option<usize> {
        self.inner.is_regular()
    }

    fn component_count(&self) -> usize {
        self.inner.component_count()
    }

    fn adjacency(&self) -> Vec<Vec<f64>> {
        self.inner.adjacency_matrix().to_rows()
    }

    /// `alpha A + beta D + gamma I + eta J`.
    fn universal_matrix(&self, params: [f64; 4]) -> Vec<Vec<f64>> {
        graphs::universal_matrix(&self.inner, &params.into()).to_rows()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(order={}, edges={})",
            self.inner.order(),
            self.inner.edge_count()
        )
    }
}

/// Result of a structured spectrum computation.
#[pyclass(name = "SpectrumReport", module = "hspec", frozen, get_all)]
struct PyReport {
    /// Descending eigenvalues with repetition.
    eigenvalues: Vec<f64>,
    /// `(value, multiplicity)` pairs.
    grouped: Vec<(f64, usize)>,
    /// Reduced matrices `C_1, C_2, ...` as row lists.
    reduced_matrices: Vec<Vec<Vec<f64>>>,
    reduced_eigenvalues: Vec<Vec<f64>>,
    oracle_eigenvalues: Option<Vec<f64>>,
    max_abs_diff: Option<f64>,
}

impl From<SpectrumReport> for PyReport {
    fn from(r: SpectrumReport) -> Self {
        PyReport {
            eigenvalues: r.structured.values(),
            grouped: r
                .structured
                .entries()
                .iter()
                .map(|e| (e.value, e.multiplicity))
                .collect(),
            reduced_matrices: r
                .reduced_matrices
                .iter()
                .map(|m| m.matrix.to_rows())
                .collect(),
            reduced_eigenvalues: r
                .reduced_matrices
                .into_iter()
                .map(|m| m.eigenvalues)
                .collect(),
            oracle_eigenvalues: r.oracle.map(|o| o.values()),
            max_abs_diff: r.max_abs_diff,
        }
    }
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "SpectrumReport(dimension={}, reduced={})",
            self.eigenvalues.len(),
            self.reduced_matrices.len()
        )
    }
}

/// Eigenvalues (descending) and matching unit eigenvectors.
#[pyfunction]
fn eigh(matrix: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, Vectors)> {
    let d = linalg::eigh(&sym(&matrix)?).map_err(err)?;
    Ok((d.values.clone(), columns(&d.vectors)))
}

/// Orthonormal basis diagonalizing every matrix of a commuting family.
/// Returns `(vectors, table)` with `table[i][j]` the eigenvalue of matrix `j`
/// on vector `i`.
#[pyfunction]
#[pyo3(signature = (family, seed=None, tol=COMMUTE_TOL))]
fn common_eigenbasis(
    family: Vec<Vec<Vec<f64>>>,
    seed: Option<Vec<f64>>,
    tol: f64,
) -> PyResult<(Vectors, Vec<Vec<f64>>)> {
    let family = family
        .iter()
        .map(|m| sym(m))
        .collect::<PyResult<Vec<_>>>()?;
    let b = linalg::common_eigenbasis(&family, seed.as_deref(), tol).map_err(err)?;
    let table = (0..b.order())
        .map(|i| (0..b.family_size()).map(|j| b.eigenvalue(i, j)).collect())
        .collect();
    Ok((columns(&b.basis), table))
}

fn fiedler_input(
    blocks: &[Vec<Vec<f64>>],
    k: usize,
    coupling: &[Vec<f64>],
) -> PyResult<FiedlerInput> {
    let blocks = blocks
        .iter()
        .map(|b| sym(b))
        .collect::<PyResult<Vec<_>>>()?;
    let coupling = CouplingSpec::from_rows(coupling).map_err(err)?;
    FiedlerInput::from_blocks(blocks, k, coupling).map_err(err)
}

/// Spectrum of the coupled block matrix, descending.
#[pyfunction]
fn coupled_spectrum(
    blocks: Vec<Vec<Vec<f64>>>,
    k: usize,
    coupling: Vec<Vec<f64>>,
) -> PyResult<Vec<f64>> {
    let input = fiedler_input(&blocks, k, &coupling)?;
    Ok(engine_spectrum(&input).map_err(err)?.values())
}

/// Eigenpairs `(value, vector)` of the coupled block matrix.
#[pyfunction]
fn coupled_eigenpairs(
    blocks: Vec<Vec<Vec<f64>>>,
    k: usize,
    coupling: Vec<Vec<f64>>,
) -> PyResult<Vec<(f64, Vec<f64>)>> {
    let input = fiedler_input(&blocks, k, &coupling)?;
    Ok(engine_pairs(&input)
        .map_err(err)?
        .into_iter()
        .map(|p| (p.value, p.vector.iter().copied().collect()))
        .collect())
}

fn unwrap_factors(factors: &[PyRef<'_, PyGraph>]) -> Vec<Graph> {
    factors.iter().map(|f| f.inner.clone()).collect()
}

#[pyfunction]
fn h_product(h: PyRef<'_, PyGraph>, factors: Vec<PyRef<'_, PyGraph>>) -> PyResult<PyGraph> {
    graphs::h_product(&h.inner, &unwrap_factors(&factors))
        .map(Into::into)
        .map_err(err)
}

fn kind_of(matrix: &str, params: Option<[f64; 4]>) -> PyResult<MatrixKind> {
    MatrixKind::parse(matrix, params).map_err(err)
}

/// Structured spectrum of the H-product for `matrix` in `adjacency`,
/// `laplacian`, `signless_laplacian`, `seidel` or `universal` (which needs
/// `params = [alpha, beta, gamma, eta]`). With `oracle=True` the dense
/// spectrum is computed as well and compared.
#[pyfunction]
#[pyo3(signature = (h, factors, matrix="adjacency", params=None, oracle=false, tol=COMMUTE_TOL))]
fn hproduct_spectrum(
    py: Python<'_>,
    h: PyRef<'_, PyGraph>,
    factors: Vec<PyRef<'_, PyGraph>>,
    matrix: &str,
    params: Option<[f64; 4]>,
    oracle: bool,
    tol: f64,
) -> PyResult<PyReport> {
    let job = HProductJob::new(
        h.inner.clone(),
        unwrap_factors(&factors),
        kind_of(matrix, params)?,
    )
    .map_err(err)?;
    py.detach(|| {
        let mut report = spectra::structured_spectrum(&job, tol)?;
        if oracle {
            report.attach_oracle(&job)?;
        }
        Ok(report.into())
    })
    .map_err(err)
}

/// Eigenvalues of the assembled H-product matrix, descending.
#[pyfunction]
#[pyo3(signature = (h, factors, matrix="adjacency", params=None))]
fn dense_spectrum(
    py: Python<'_>,
    h: PyRef<'_, PyGraph>,
    factors: Vec<PyRef<'_, PyGraph>>,
    matrix: &str,
    params: Option<[f64; 4]>,
) -> PyResult<Vec<f64>> {
    let job = HProductJob::new(
        h.inner.clone(),
        unwrap_factors(&factors),
        kind_of(matrix, params)?,
    )
    .map_err(err)?;
    py.detach(|| dense_oracle_spectrum(&job).map(|s| s.values()))
        .map_err(err)
}

#[pymodule]
fn hspec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HspecError", m.py().get_type::<HspecError>())?;
    m.add("ADJACENCY", UniversalParams::ADJACENCY.to_array())?;
    m.add("LAPLACIAN", UniversalParams::LAPLACIAN.to_array())?;
    m.add(
        "SIGNLESS_LAPLACIAN",
        UniversalParams::SIGNLESS_LAPLACIAN.to_array(),
    )?;
    m.add("SEIDEL", UniversalParams::SEIDEL.to_array())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(eigh, m)?)?;
    m.add_function(wrap_pyfunction!(common_eigenbasis, m)?)?;
    m.add_function(wrap_pyfunction!(coupled_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(coupled_eigenpairs, m)?)?;
    m.add_function(wrap_pyfunction!(h_product, m)?)?;
    m.add_function(wrap_pyfunction!(hproduct_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(dense_spectrum, m)?)?;
    Ok(())
}
