//! Dense symmetric eigensolves, commutator norms and simultaneous
//! diagonalization of commuting symmetric families.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Default relative symmetry tolerance for [`SymMatrix`].
pub const SYM_TOL: f64 = 1e-12;
/// Default relative tolerance for commutation checks.
pub const COMMUTE_TOL: f64 = 1e-10;
/// Eigenvalues closer than this (relative to `max(1, ||A||_F)`) are treated
/// as one eigenspace when refining a common basis.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Dense real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    data: DMatrix<f64>,
}

impl SymMatrix {
    /// Wraps a square matrix, checking finiteness and symmetry at [`SYM_TOL`].
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(data, SYM_TOL)
    }

    pub fn with_tolerance(data: DMatrix<f64>, sym_tol: f64) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows == 0 {
            return Err(Error::InvalidInput("matrix must have size >= 1".into()));
        }
        if rows != cols {
            return Err(Error::SizeMismatch {
                expected: rows,
                actual: cols,
            });
        }
        let mut max_abs = 0.0f64;
        for j in 0..cols {
            for i in 0..rows {
                let v = data[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                max_abs = max_abs.max(v.abs());
            }
        }
        let bound = sym_tol * max_abs.max(1.0);
        for j in 0..cols {
            for i in (j + 1)..rows {
                let deviation = (data[(i, j)] - data[(j, i)]).abs();
                if deviation > bound {
                    return Err(Error::NonSymmetric {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        Ok(SymMatrix { data })
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

    /// Builds the matrix from a generator evaluated on the lower triangle and
    /// mirrored, so the result is exactly symmetric.
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in j..n {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        Self::new(data)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            data: DMatrix::zeros(n, n),
        }
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn size(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn trace(&self) -> f64 {
        self.data.trace()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.size())
            .map(|i| self.data.row(i).iter().copied().collect())
            .collect()
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> SymMatrix {
        let n = self.size();
        SymMatrix {
            data: &self.data + DMatrix::identity(n, n) * shift,
        }
    }
}

/// Eigenvalues with paired orthonormal eigenvectors (column `i` belongs to
/// `values[i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    /// Assembles a decomposition in caller-chosen order. Nothing is sorted;
    /// use [`EigenDecomposition::validate`] to check it against a matrix.
    pub fn from_parts(values: Vec<f64>, vectors: DMatrix<f64>) -> Result<Self> {
        let m = values.len();
        if vectors.nrows() != m || vectors.ncols() != m {
            return Err(Error::SizeMismatch {
                expected: m,
                actual: vectors.ncols(),
            });
        }
        Ok(EigenDecomposition { values, vectors })
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    /// Checks orthonormality and eigenpair residuals against `a`, both scaled
    /// by `tol`.
    pub fn validate(&self, a: &SymMatrix, tol: f64) -> Result<()> {
        let m = self.size();
        if a.size() != m {
            return Err(Error::SizeMismatch {
                expected: a.size(),
                actual: m,
            });
        }
        let gram = self.vectors.transpose() * &self.vectors;
        let ortho = (gram - DMatrix::<f64>::identity(m, m)).amax();
        if ortho > tol {
            return Err(Error::InvalidInput(format!(
                "eigenvectors are not orthonormal (deviation {ortho:e})"
            )));
        }
        let scale = a.frobenius_norm().max(1.0);
        let av = a.as_matrix() * &self.vectors;
        for (i, &lambda) in self.values.iter().enumerate() {
            let r = (av.column(i) - self.vectors.column(i) * lambda).norm();
            if r > tol * scale {
                return Err(Error::InvalidInput(format!(
                    "eigenpair {i} has residual {r:e}"
                )));
            }
        }
        Ok(())
    }
}

/// Flips `v` so that its entry of largest magnitude is positive. Entries
/// within a relative 1e-10 of the maximum count as ties; the lowest index
/// wins.
pub fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let cutoff = max * (1.0 - 1e-10);
    if let Some(&lead) = v.iter().find(|x| x.abs() >= cutoff) {
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn fix_column_signs(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        fix_sign(col.as_mut_slice());
    }
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    idx
}

/// Full symmetric eigendecomposition, eigenvalues descending.
pub fn eigh(a: &SymMatrix) -> Result<EigenDecomposition> {
    let n = a.size();
    let eig =
        SymmetricEigen::try_new(a.data.clone(), f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let order = descending_order(eig.eigenvalues.as_slice());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    fix_column_signs(&mut vectors);
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, descending. Skips eigenvector accumulation, which makes
/// it the cheaper route for large dense oracles.
pub fn eigvalsh(a: &SymMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = a.data.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// `||AB - BA||_F`.
pub fn commutator_norm(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch {
            expected: a.size(),
            actual: b.size(),
        });
    }
    let ab = &a.data * &b.data;
    let ba = &b.data * &a.data;
    Ok((ab - ba).norm())
}

/// Checks that every pair in `family` commutes within
/// `tol * max(1, ||A_i||_F ||A_j||_F)`.
pub fn check_commuting(family: &[SymMatrix], tol: f64) -> Result<()> {
    let norms: Vec<f64> = family.iter().map(SymMatrix::frobenius_norm).collect();
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let norm = commutator_norm(&family[i], &family[j])?;
            if norm > tol * (norms[i] * norms[j]).max(1.0) {
                return Err(Error::NotCommuting {
                    first: i,
                    second: j,
                    norm,
                });
            }
        }
    }
    Ok(())
}

/// Orthonormal basis shared by a commuting family, with the eigenvalue table
/// `table[(i, j)] = u_i^T A_j u_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonBasis {
    pub basis: DMatrix<f64>,
    pub table: DMatrix<f64>,
}

impl CommonBasis {
    pub fn order(&self) -> usize {
        self.basis.nrows()
    }

    pub fn family_size(&self) -> usize {
        self.table.ncols()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.basis.column(i).into_owned()
    }

    pub fn eigenvalue(&self, i: usize, j: usize) -> f64 {
        self.table[(i, j)]
    }

    /// Eigenvalues of family member `j`, in basis order.
    pub fn eigenvalues_of(&self, j: usize) -> Vec<f64> {
        self.table.column(j).iter().copied().collect()
    }

    /// The basis viewed as an eigendecomposition of family member `j`.
    pub fn decomposition_of(&self, j: usize) -> EigenDecomposition {
        EigenDecomposition {
            values: self.eigenvalues_of(j),
            vectors: self.basis.clone(),
        }
    }
}

/// Simultaneously diagonalizes a commuting family.
///
/// The first matrix is eigendecomposed; each of its eigenspaces of dimension
/// greater than one is refined by diagonalizing the next matrix projected
/// onto it, and so on through the family. When `seed` is given it becomes
/// the first basis vector and the refinement runs on its orthogonal
/// complement. No randomness is involved, so the output is a deterministic
/// function of the input.
pub fn common_eigenbasis(
    family: &[SymMatrix],
    seed: Option<&[f64]>,
    tol: f64,
) -> Result<CommonBasis> {
    let first = family
        .first()
        .ok_or_else(|| Error::InvalidInput("empty matrix family".into()))?;
    let n = first.size();
    for m in family {
        if m.size() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: m.size(),
            });
        }
    }
    check_commuting(family, tol)?;

    let group_tols: Vec<f64> = family
        .iter()
        .map(|m| DEGENERACY_TOL * m.frobenius_norm().max(1.0))
        .collect();

    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(n);
    let start = match seed {
        Some(s) => {
            let s = unit_seed(s, n)?;
            for (j, m) in family.iter().enumerate() {
                let av = m.as_matrix() * &s;
                let rayleigh = s.dot(&av);
                let residual = (av - &s * rayleigh).norm();
                if residual > tol * m.frobenius_norm().max(1.0) {
                    return Err(Error::SeedNotEigenvector {
                        matrix: j,
                        residual,
                    });
                }
            }
            let complement = orthogonal_complement(&s);
            columns.push(s);
            complement
        }
        None => DMatrix::identity(n, n),
    };
    if start.ncols() > 0 {
        refine(family, &group_tols, start, 0, &mut columns)?;
    }

    let mut basis = DMatrix::from_columns(&columns);
    fix_column_signs(&mut basis);
    let table = DMatrix::from_fn(n, family.len(), |i, j| {
        let u = basis.column(i);
        u.dot(&(family[j].as_matrix() * u))
    });
    Ok(CommonBasis { basis, table })
}

fn unit_seed(s: &[f64], n: usize) -> Result<DVector<f64>> {
    if s.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: s.len(),
        });
    }
    let v = DVector::from_column_slice(s);
    let norm = v.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::InvalidInput(
            "seed vector must be nonzero and finite".into(),
        ));
    }
    Ok(v / norm)
}

/// Columns of the Householder reflector mapping `s` onto a coordinate axis,
/// minus that axis: an orthonormal basis of `s`'s orthogonal complement.
fn orthogonal_complement(s: &DVector<f64>) -> DMatrix<f64> {
    let n = s.len();
    let pivot = s.iamax();
    let mut v = s.clone();
    v[pivot] += s[pivot].signum();
    let vv = v.dot(&v);
    let reflector = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv);
    let keep: Vec<_> = (0..n)
        .filter(|&c| c != pivot)
        .map(|c| reflector.column(c).into_owned())
        .collect();
    if keep.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&keep)
    }
}

fn refine(
    family: &[SymMatrix],
    group_tols: &[f64],
    subspace: DMatrix<f64>,
    depth: usize,
    out: &mut Vec<DVector<f64>>,
) -> Result<()> {
    if subspace.ncols() == 1 || depth == family.len() {
        out.extend(subspace.column_iter().map(|c| c.into_owned()));
        return Ok(());
    }
    let projected = subspace.transpose() * family[depth].as_matrix() * &subspace;
    let projected = (&projected + projected.transpose()) * 0.5;
    let local = eigh(&SymMatrix::new(projected)?)?;
    let rotated = &subspace * &local.vectors;

    let tol = group_tols[depth];
    let mut lo = 0;
    while lo < local.values.len() {
        let mut hi = lo + 1;
        while hi < local.values.len() && local.values[hi - 1] - local.values[hi] <= tol {
            hi += 1;
        }
        let block = rotated.columns(lo, hi - lo).into_owned();
        refine(family, group_tols, block, depth + 1, out)?;
        lo = hi;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> SymMatrix {
        SymMatrix::from_lower_fn(4, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap()
    }

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> SymMatrix {
        let mut m = DMatrix::zeros(n, n);
        for &(u, v) in edges {
            m[(u, v)] = 1.0;
            m[(v, u)] = 1.0;
        }
        SymMatrix::new(m).unwrap()
    }

    #[test]
    fn rejects_asymmetric_and_nonfinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.1, 1.0]);
        assert!(matches!(SymMatrix::new(m), Err(Error::NonSymmetric { .. })));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(matches!(SymMatrix::new(m), Err(Error::NonFinite { .. })));
        let m = DMatrix::<f64>::zeros(0, 0);
        assert!(SymMatrix::new(m).is_err());
    }

    #[test]
    fn symmetry_tolerance_is_relative() {
        let m = DMatrix::from_row_slice(2, 2, &[1e6, 1.0, 1.0 + 1e-7, 0.0]);
        assert!(SymMatrix::new(m).is_ok());
    }

    #[test]
    fn eigh_identity() {
        let d = eigh(&SymMatrix::identity(2)).unwrap();
        assert_eq!(d.values, vec![1.0, 1.0]);
    }

    #[test]
    fn eigh_complete_graph() {
        let d = eigh(&k4()).unwrap();
        let expected = [3.0, -1.0, -1.0, -1.0];
        for (a, b) in d.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        // Perron vector is positive under the sign convention.
        assert!(d.vectors.column(0).iter().all(|&x| x > 0.0));
        d.validate(&k4(), 1e-10).unwrap();
    }

    #[test]
    fn sign_convention_picks_lowest_index_on_ties() {
        let mut v = [-0.5, 0.5, 0.5, -0.5];
        fix_sign(&mut v);
        assert_eq!(v, [0.5, -0.5, -0.5, 0.5]);
        let mut w = [0.1, -0.9, 0.2];
        fix_sign(&mut w);
        assert_eq!(w, [-0.1, 0.9, -0.2]);
    }

    #[test]
    fn commutator_of_example_factors_is_zero() {
        let matching = from_edges(4, &[(0, 2), (1, 3)]);
        let cycle = from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(commutator_norm(&matching, &cycle).unwrap(), 0.0);
        assert_eq!(commutator_norm(&cycle, &cycle).unwrap(), 0.0);
    }

    #[test]
    fn commutator_of_path_and_edge() {
        let p3 = from_edges(3, &[(0, 1), (1, 2)]);
        let e = from_edges(3, &[(0, 2)]);
        // AB = [[0,0,1],[1,0,1],[1,0,0]], BA is its transpose, so AB - BA
        // has four entries of magnitude 1.
        let ab = p3.as_matrix() * e.as_matrix();
        let ba = e.as_matrix() * p3.as_matrix();
        let mut brute = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                brute += (ab[(i, j)] - ba[(i, j)]).powi(2);
            }
        }
        let c = commutator_norm(&p3, &e).unwrap();
        assert_eq!(c, brute.sqrt());
        assert_eq!(c, 2.0);
        assert_eq!(c, commutator_norm(&e, &p3).unwrap());
    }

    #[test]
    fn commutator_size_mismatch() {
        assert!(matches!(
            commutator_norm(&SymMatrix::identity(2), &SymMatrix::identity(3)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn common_basis_of_diagonal_family() {
        let a = SymMatrix::diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let b = SymMatrix::diagonal(&[5.0, 5.0, 7.0]).unwrap();
        let cb = common_eigenbasis(&[a, b], None, COMMUTE_TOL).unwrap();
        // Descending order of the first matrix: indices 0, 2, 1.
        let expected_cols = [0, 2, 1];
        for (i, &c) in expected_cols.iter().enumerate() {
            assert!((cb.basis[(c, i)] - 1.0).abs() < 1e-14);
        }
        assert_eq!(cb.eigenvalues_of(0), vec![3.0, 2.0, 1.0]);
        assert_eq!(cb.eigenvalues_of(1), vec![5.0, 7.0, 5.0]);
    }

    #[test]
    fn common_basis_of_example_family_with_seed() {
        let matching = from_edges(4, &[(0, 2), (1, 3)]);
        let cycle = from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let family = vec![k4(), matching, cycle, k4()];
        let seed = [0.5; 4];
        let cb = common_eigenbasis(&family, Some(&seed), COMMUTE_TOL).unwrap();
        for i in 0..4 {
            assert!((cb.basis[(i, 0)] - 0.5).abs() < 1e-14);
        }
        let gram = cb.basis.transpose() * &cb.basis;
        assert!((gram - DMatrix::<f64>::identity(4, 4)).amax() < 1e-12);
        for (j, a) in family.iter().enumerate() {
            let d = cb.basis.transpose() * a.as_matrix() * &cb.basis;
            for r in 0..4 {
                for c in 0..4 {
                    if r != c {
                        assert!(d[(r, c)].abs() < 1e-10, "matrix {j} not diagonal");
                    }
                }
            }
        }
        let mut spectra: Vec<Vec<f64>> = (0..4)
            .map(|j| {
                let mut v = cb.eigenvalues_of(j);
                v.sort_by(|a, b| b.total_cmp(a));
                v.iter().map(|x| x.round()).collect()
            })
            .collect();
        assert_eq!(spectra.remove(0), vec![3.0, -1.0, -1.0, -1.0]);
        assert_eq!(spectra.remove(0), vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(spectra.remove(0), vec![2.0, 0.0, 0.0, -2.0]);
        // Seed column carries the top eigenvalue of every regular factor.
        assert!((cb.eigenvalue(0, 2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_commuting_family_reports_pair() {
        let p3 = from_edges(3, &[(0, 1), (1, 2)]);
        let e = from_edges(3, &[(0, 2)]);
        let err =
            common_eigenbasis(&[SymMatrix::identity(3), p3, e], None, COMMUTE_TOL).unwrap_err();
        match err {
            Error::NotCommuting {
                first,
                second,
                norm,
            } => {
                assert_eq!((first, second), (1, 2));
                assert_eq!(norm, 2.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seed_must_be_common_eigenvector() {
        let p3 = from_edges(3, &[(0, 1), (1, 2)]);
        let err = common_eigenbasis(&[p3], Some(&[1.0, 1.0, 1.0]), COMMUTE_TOL).unwrap_err();
        assert!(matches!(err, Error::SeedNotEigenvector { matrix: 0, .. }));
    }

    #[test]
    fn one_by_one_family_with_seed() {
        let a = SymMatrix::diagonal(&[4.0]).unwrap();
        let cb = common_eigenbasis(&[a], Some(&[-2.0]), COMMUTE_TOL).unwrap();
        assert_eq!(cb.basis[(0, 0)], 1.0);
        assert_eq!(cb.eigenvalue(0, 0), 4.0);
    }
}
