//! Generalized Fiedler reduction.
//!
//! Given symmetric blocks `A_1, .., A_n` with orthonormal eigenpairs
//! `(lambda_{i,j}, u_{i,j})` and symmetric couplings `rho_{i,j}`, the block
//! matrix
//!
//! ```text
//! C = [ A_i            if i == j
//!     [ rho_{i,j} U_i U_j^T  otherwise,   U_j = (u_{1,j} | .. | u_{k,j})
//! ```
//!
//! has as eigenvalues the untouched `lambda_{i,j}` for `i > k`, together with
//! the eigenvalues of the `k` small matrices
//! `C_t = diag(lambda_{t,1}, .., lambda_{t,n}) + offdiag(rho)`. An eigenvector
//! `w` of `C_t` lifts to `(w_1 u_{t,1}; ..; w_n u_{t,n})`.
//!
//! Which eigenpairs count as "the first k", and how index `t` lines up across
//! blocks, is decided entirely by the order of `decomps`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{eigh, EigenDecomposition, SymMatrix};
use crate::spectrum::{Provenance, Spectrum, GROUPING_TOL};

/// Tolerance used to validate caller-supplied eigendecompositions.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

/// Symmetric matrix of coupling scalars. The diagonal is stored as zero and
/// never read.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    rho: DMatrix<f64>,
}

impl CouplingSpec {
    /// Requires a square, exactly symmetric, finite matrix. Diagonal entries
    /// are discarded.
    pub fn new(mut rho: DMatrix<f64>) -> Result<Self> {
        let n = rho.nrows();
        if n == 0 || rho.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "coupling matrix must be square and non-empty, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if !rho[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if rho[(i, j)] != rho[(j, i)] {
                    return Err(Error::NonSymmetric {
                        row: i,
                        col: j,
                        deviation: (rho[(i, j)] - rho[(j, i)]).abs(),
                    });
                }
            }
            rho[(i, i)] = 0.0;
        }
        Ok(CouplingSpec { rho })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(n: usize) -> Self {
        CouplingSpec {
            rho: DMatrix::zeros(n, n),
        }
    }

    /// Two blocks coupled by a single scalar.
    pub fn pair(rho: f64) -> Self {
        CouplingSpec {
            rho: DMatrix::from_row_slice(2, 2, &[0.0, rho, rho, 0.0]),
        }
    }

    /// Chain coupling: block `i` talks only to block `i + 1`, with strength
    /// `rhos[i]`.
    pub fn chain(rhos: &[f64]) -> Self {
        let n = rhos.len() + 1;
        let mut rho = DMatrix::zeros(n, n);
        for (i, &r) in rhos.iter().enumerate() {
            rho[(i, i + 1)] = r;
            rho[(i + 1, i)] = r;
        }
        CouplingSpec { rho }
    }

    pub fn block_count(&self) -> usize {
        self.rho.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.rho[(i, j)]
        }
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.rho
    }

    /// Row sums of the off-diagonal couplings.
    pub fn row_sums(&self) -> Vec<f64> {
        self.rho.row_iter().map(|r| r.sum()).collect()
    }
}

/// A validated problem for the Fiedler engine.
#[derive(Debug, Clone)]
pub struct FiedlerInput {
    blocks: Vec<SymMatrix>,
    decomps: Vec<EigenDecomposition>,
    k: usize,
    coupling: CouplingSpec,
}

impl FiedlerInput {
    pub fn new(
        blocks: Vec<SymMatrix>,
        decomps: Vec<EigenDecomposition>,
        k: usize,
        coupling: CouplingSpec,
    ) -> Result<Self> {
        let n = blocks.len();
        if n == 0 {
            return Err(Error::InvalidInput("at least one block is required".into()));
        }
        if decomps.len() != n || coupling.block_count() != n {
            return Err(Error::InvalidInput(format!(
                "{n} blocks, {} decompositions, coupling for {} blocks",
                decomps.len(),
                coupling.block_count()
            )));
        }
        let min_size = blocks.iter().map(SymMatrix::size).min().unwrap_or(0);
        if k == 0 || k > min_size {
            return Err(Error::InvalidInput(format!(
                "k = {k} must lie in 1..={min_size}"
            )));
        }
        for (j, (a, d)) in blocks.iter().zip(&decomps).enumerate() {
            d.validate(a, DECOMPOSITION_TOL)
                .map_err(|e| Error::InvalidInput(format!("block {j}: {e}")))?;
        }
        Ok(FiedlerInput {
            blocks,
            decomps,
            k,
            coupling,
        })
    }

    /// Eigendecomposes each block (descending order) and uses that order.
    pub fn from_blocks(blocks: Vec<SymMatrix>, k: usize, coupling: CouplingSpec) -> Result<Self> {
        let decomps = blocks.iter().map(eigh).collect::<Result<Vec<_>>>()?;
        Self::new(blocks, decomps, k, coupling)
    }

    pub fn blocks(&self) -> &[SymMatrix] {
        &self.blocks
    }

    pub fn decomps(&self) -> &[EigenDecomposition] {
        &self.decomps
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coupling(&self) -> &CouplingSpec {
        &self.coupling
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(SymMatrix::size).collect()
    }

    /// Total dimension `sum m_j` of the coupled matrix.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(SymMatrix::size).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += b.size();
                Some(start)
            })
            .collect()
    }

    /// Same input with `shift * I` added to every block and every eigenvalue.
    pub fn shifted(&self, shift: f64) -> FiedlerInput {
        FiedlerInput {
            blocks: self.blocks.iter().map(|b| b.shifted(shift)).collect(),
            decomps: self
                .decomps
                .iter()
                .map(|d| EigenDecomposition {
                    values: d.values.iter().map(|v| v + shift).collect(),
                    vectors: d.vectors.clone(),
                })
                .collect(),
            k: self.k,
            coupling: self.coupling.clone(),
        }
    }
}

/// An eigenpair of the coupled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: DVector<f64>,
    pub provenance: Provenance,
}

/// Builds the full coupled matrix `C`. Only needed for verification; the
/// spectrum itself never touches it.
pub fn assemble_coupled(input: &FiedlerInput) -> Result<SymMatrix> {
    let dim = input.dimension();
    let offsets = input.offsets();
    let k = input.k;
    let leading: Vec<DMatrix<f64>> = input
        .decomps
        .iter()
        .map(|d| d.vectors.columns(0, k).into_owned())
        .collect();
    let mut c = DMatrix::zeros(dim, dim);
    for (j, block) in input.blocks.iter().enumerate() {
        let m = block.size();
        c.view_mut((offsets[j], offsets[j]), (m, m))
            .copy_from(block.as_matrix());
    }
    for i in 0..input.block_count() {
        for j in (i + 1)..input.block_count() {
            let rho = input.coupling.get(i, j);
            if rho == 0.0 {
                continue;
            }
            let off = (&leading[i] * leading[j].transpose()) * rho;
            c.view_mut((offsets[i], offsets[j]), off.shape())
                .copy_from(&off);
            c.view_mut((offsets[j], offsets[i]), (off.ncols(), off.nrows()))
                .copy_from(&off.transpose());
        }
    }
    SymMatrix::new(c).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// The `n x n` reduced matrix `C_t`, `t` in `1..=k`.
pub fn reduced_matrix(t: usize, input: &FiedlerInput) -> Result<SymMatrix> {
    if t == 0 || t > input.k {
        return Err(Error::IndexOutOfRange {
            index: t,
            max: input.k,
        });
    }
    let n = input.block_count();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = if i == j {
                input.decomps[j].values[t - 1]
            } else {
                input.coupling.get(i, j)
            };
        }
    }
    SymMatrix::new(m)
}

/// All reduced matrices `C_1, .., C_k`.
pub fn reduced_matrices(input: &FiedlerInput) -> Result<Vec<SymMatrix>> {
    (1..=input.k).map(|t| reduced_matrix(t, input)).collect()
}

fn leftovers(input: &FiedlerInput) -> impl Iterator<Item = (usize, usize)> + '_ {
    input
        .decomps
        .iter()
        .enumerate()
        .flat_map(move |(j, d)| (input.k..d.size()).map(move |i| (j, i)))
}

/// Spectrum of the coupled matrix from the leftover eigenvalues and the
/// eigenvalues of every `C_t`.
pub fn coupled_spectrum(input: &FiedlerInput) -> Result<Spectrum> {
    let mut raw = Vec::with_capacity(input.dimension());
    for (j, i) in leftovers(input) {
        raw.push((
            input.decomps[j].values[i],
            Provenance::Leftover {
                block: j + 1,
                index: i + 1,
            },
        ));
    }
    for t in 1..=input.k {
        let ct = reduced_matrix(t, input)?;
        let d = eigh(&ct)?;
        raw.extend(
            d.values
                .iter()
                .enumerate()
                .map(|(s, &v)| (v, Provenance::Reduced { t, s: s + 1 })),
        );
    }
    Ok(Spectrum::new(raw, GROUPING_TOL))
}

/// Every eigenpair of the coupled matrix: lifted eigenvectors of the reduced
/// matrices first (by `t`, then descending), then the zero-padded leftovers.
pub fn coupled_eigenpairs(input: &FiedlerInput) -> Result<Vec<Eigenpair>> {
    let dim = input.dimension();
    let offsets = input.offsets();
    let mut pairs = Vec::with_capacity(dim);
    for t in 1..=input.k {
        let d = eigh(&reduced_matrix(t, input)?)?;
        for (s, &value) in d.values.iter().enumerate() {
            let w = d.vectors.column(s);
            let mut v = DVector::zeros(dim);
            for (j, dec) in input.decomps.iter().enumerate() {
                let u = dec.vectors.column(t - 1);
                v.rows_mut(offsets[j], u.len()).axpy(w[j], &u, 0.0);
            }
            pairs.push(Eigenpair {
                value,
                vector: v,
                provenance: Provenance::Reduced { t, s: s + 1 },
            });
        }
    }
    for (j, i) in leftovers(input) {
        let dec = &input.decomps[j];
        let mut v = DVector::zeros(dim);
        v.rows_mut(offsets[j], dec.size())
            .copy_from(&dec.vectors.column(i));
        pairs.push(Eigenpair {
            value: dec.values[i],
            vector: v,
            provenance: Provenance::Leftover {
                block: j + 1,
                index: i + 1,
            },
        });
    }
    Ok(pairs)
}

/// Largest `||C v - xi v||_2` over `pairs`.
pub fn max_residual(c: &SymMatrix, pairs: &[Eigenpair]) -> f64 {
    pairs
        .iter()
        .map(|p| (c.as_matrix() * &p.vector - &p.vector * p.value).norm())
        .fold(0.0, f64::max)
}
