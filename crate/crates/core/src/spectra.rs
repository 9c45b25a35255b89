//! Spectra of H-products of commuting graphs.
//!
//! The adjacency matrix of `Lambda_H(H_1, .., H_l)` is a block matrix with
//! diagonal blocks `A(H_j)` and off-diagonal blocks `rho_{jk} I`, where
//! `rho = A(H)`. Writing `I = U U^T` for a basis `U` shared by the commuting
//! factors turns it into an instance of the Fiedler engine with `k = n`, so
//! the spectrum splits into `n` problems of size `l`.
//!
//! For universal adjacency matrices the `eta J` term couples blocks through
//! the all-ones direction only, so the basis is seeded with `j_n / sqrt(n)`
//! and the problem is solved as two engine instances: one on the all-ones
//! direction (coupling `alpha rho + n eta`) and one on its complement
//! (coupling `alpha rho`).

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fiedler::{coupled_eigenpairs, coupled_spectrum, CouplingSpec, Eigenpair, FiedlerInput};
use crate::graphs::{h_product, universal_matrix, Graph, UniversalParams};
use crate::linalg::{
    common_eigenbasis, eigh, eigvalsh, CommonBasis, EigenDecomposition, SymMatrix,
};
use crate::spectrum::{compare_spectra, Provenance, Spectrum, GROUPING_TOL};

/// Default tolerance for structured-vs-dense comparisons.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    SignlessLaplacian,
    Seidel,
    Universal(UniversalParams),
}

impl MatrixKind {
    pub fn params(&self) -> UniversalParams {
        match self {
            MatrixKind::Adjacency => UniversalParams::ADJACENCY,
            MatrixKind::Laplacian => UniversalParams::LAPLACIAN,
            MatrixKind::SignlessLaplacian => UniversalParams::SIGNLESS_LAPLACIAN,
            MatrixKind::Seidel => UniversalParams::SEIDEL,
            MatrixKind::Universal(p) => *p,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::SignlessLaplacian => "signless_laplacian",
            MatrixKind::Seidel => "seidel",
            MatrixKind::Universal(_) => "universal",
        }
    }

    /// Parses a kind name; `params` must be present exactly for
    /// `"universal"`.
    pub fn parse(name: &str, params: Option<[f64; 4]>) -> Result<Self> {
        let kind = match (name, params) {
            ("universal", Some(p)) => return Ok(MatrixKind::Universal(p.into())),
            ("universal", None) => {
                return Err(Error::InvalidInput(
                    "matrix kind \"universal\" requires params".into(),
                ))
            }
            ("adjacency", _) => MatrixKind::Adjacency,
            ("laplacian", _) => MatrixKind::Laplacian,
            ("signless_laplacian", _) => MatrixKind::SignlessLaplacian,
            ("seidel", _) => MatrixKind::Seidel,
            (other, _) => {
                return Err(Error::InvalidInput(format!(
                    "unknown matrix kind {other:?}"
                )))
            }
        };
        if params.is_some() {
            return Err(Error::InvalidInput(format!(
                "params are only allowed for matrix kind \"universal\", not {name:?}"
            )));
        }
        Ok(kind)
    }
}

/// Everything needed to compute one spectrum of an H-product.
#[derive(Debug, Clone)]
pub struct HProductJob {
    pub h: Graph,
    pub factors: Vec<Graph>,
    pub kind: MatrixKind,
    /// Structured-vs-oracle comparison tolerance.
    pub tolerance: f64,
}

impl HProductJob {
    pub fn new(h: Graph, factors: Vec<Graph>, kind: MatrixKind) -> Result<Self> {
        check_factors(&h, &factors)?;
        Ok(HProductJob {
            h,
            factors,
            kind,
            tolerance: ORACLE_TOL,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn product(&self) -> Result<Graph> {
        h_product(&self.h, &self.factors)
    }

    /// The full `(n l) x (n l)` matrix of the job.
    pub fn matrix(&self) -> Result<SymMatrix> {
        Ok(universal_matrix(&self.product()?, &self.kind.params()))
    }
}

/// A reduced matrix `C_t` and its eigenvalues (descending).
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedMatrix {
    pub t: usize,
    pub matrix: SymMatrix,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub structured: Duration,
    pub oracle: Option<Duration>,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub structured: Spectrum,
    pub reduced_matrices: Vec<ReducedMatrix>,
    pub oracle: Option<Spectrum>,
    pub max_abs_diff: Option<f64>,
    pub timings: Timings,
}

impl SpectrumReport {
    /// True when no oracle was run or it agrees within `tol`.
    pub fn matches(&self, tol: f64) -> bool {
        self.max_abs_diff.is_none_or(|d| d <= tol)
    }

    /// Runs the dense oracle on `job` and records the comparison.
    pub fn attach_oracle(&mut self, job: &HProductJob) -> Result<()> {
        let start = Instant::now();
        let oracle = dense_oracle_spectrum(job)?;
        self.timings.oracle = Some(start.elapsed());
        let (_, diff) = compare_spectra(&self.structured, &oracle, job.tolerance)?;
        self.max_abs_diff = Some(diff);
        self.oracle = Some(oracle);
        Ok(())
    }
}

/// One engine instance of a reduction. `lift` maps engine block coordinates
/// back to factor vertex coordinates (`None` means they already coincide);
/// `t_offset` shifts the engine's `t` to the basis index.
#[derive(Debug, Clone)]
pub struct ReductionPart {
    pub input: FiedlerInput,
    pub lift: Option<DMatrix<f64>>,
    pub t_offset: usize,
}

/// The structured form of an H-product job: a common basis of the factors
/// and the engine instances built on it.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub basis: CommonBasis,
    pub parts: Vec<ReductionPart>,
}

impl Reduction {
    pub fn spectrum(&self) -> Result<Spectrum> {
        let mut raw = Vec::new();
        for part in &self.parts {
            let spec = coupled_spectrum(&part.input)?;
            raw.extend(
                spec.raw()
                    .iter()
                    .map(|&(v, p)| (v, offset(p, part.t_offset))),
            );
        }
        Ok(Spectrum::new(raw, GROUPING_TOL))
    }

    pub fn reduced_matrices(&self) -> Result<Vec<SymMatrix>> {
        let mut out = Vec::new();
        for part in &self.parts {
            out.extend(crate::fiedler::reduced_matrices(&part.input)?);
        }
        Ok(out)
    }

    /// Eigenpairs of the full job matrix, in product vertex coordinates.
    pub fn eigenpairs(&self) -> Result<Vec<Eigenpair>> {
        let mut out = Vec::new();
        for part in &self.parts {
            for pair in coupled_eigenpairs(&part.input)? {
                let vector = match &part.lift {
                    None => pair.vector,
                    Some(lift) => {
                        let m = lift.ncols();
                        let n = lift.nrows();
                        let blocks = pair.vector.len() / m;
                        let mut v = DVector::zeros(blocks * n);
                        for j in 0..blocks {
                            let x = pair.vector.rows(j * m, m);
                            v.rows_mut(j * n, n).copy_from(&(lift * x));
                        }
                        v
                    }
                };
                out.push(Eigenpair {
                    value: pair.value,
                    vector,
                    provenance: offset(pair.provenance, part.t_offset),
                });
            }
        }
        Ok(out)
    }

    fn report(&self, started: Instant) -> Result<SpectrumReport> {
        let structured = self.spectrum()?;
        let matrices = self.reduced_matrices()?;
        let mut reduced: Vec<ReducedMatrix> = matrices
            .into_iter()
            .enumerate()
            .map(|(i, matrix)| ReducedMatrix {
                t: i + 1,
                matrix,
                eigenvalues: Vec::new(),
            })
            .collect();
        for &(v, p) in structured.raw() {
            if let Provenance::Reduced { t, .. } = p {
                reduced[t - 1].eigenvalues.push(v);
            }
        }
        Ok(SpectrumReport {
            structured,
            reduced_matrices: reduced,
            oracle: None,
            max_abs_diff: None,
            timings: Timings {
                structured: started.elapsed(),
                oracle: None,
            },
        })
    }
}

fn offset(p: Provenance, by: usize) -> Provenance {
    match p {
        Provenance::Reduced { t, s } => Provenance::Reduced { t: t + by, s },
        other => other,
    }
}

fn check_factors(h: &Graph, factors: &[Graph]) -> Result<usize> {
    if factors.len() != h.order() {
        return Err(Error::FactorCountMismatch {
            expected: h.order(),
            actual: factors.len(),
        });
    }
    let n = factors[0].order();
    for (index, f) in factors.iter().enumerate() {
        if f.order() != n {
            return Err(Error::OrderMismatch {
                index,
                expected: n,
                actual: f.order(),
            });
        }
    }
    Ok(n)
}

fn pattern_coupling(h: &Graph, weight: f64, background: f64) -> Result<CouplingSpec> {
    let l = h.order();
    let rho = DMatrix::from_fn(l, l, |j, k| {
        if j == k {
            0.0
        } else if h.has_edge(j, k) {
            weight + background
        } else {
            background
        }
    });
    CouplingSpec::new(rho)
}

/// Builds the engine instance for the adjacency spectrum: blocks `A(H_j)`,
/// all sharing the common basis of the factors, coupled by `A(H)` with
/// `k = n`. Factors need only commute.
pub fn adjacency_reduction(h: &Graph, factors: &[Graph], tol: f64) -> Result<Reduction> {
    check_factors(h, factors)?;
    let blocks: Vec<SymMatrix> = factors.iter().map(Graph::adjacency_matrix).collect();
    let basis = common_eigenbasis(&blocks, None, tol)?;
    let decomps = (0..blocks.len())
        .map(|j| basis.decomposition_of(j))
        .collect();
    let n = basis.order();
    let input = FiedlerInput::new(blocks, decomps, n, pattern_coupling(h, 1.0, 0.0)?)?;
    Ok(Reduction {
        basis,
        parts: vec![ReductionPart {
            input,
            lift: None,
            t_offset: 0,
        }],
    })
}

/// Builds the engine instances for a universal adjacency spectrum. Requires
/// `alpha != 0` and regular, pairwise commuting factors.
pub fn universal_reduction(
    h: &Graph,
    factors: &[Graph],
    params: &UniversalParams,
    tol: f64,
) -> Result<Reduction> {
    if params.alpha == 0.0 {
        return Err(Error::AlphaZero);
    }
    let n = check_factors(h, factors)?;
    let degrees = factors
        .iter()
        .enumerate()
        .map(|(factor, f)| f.is_regular().ok_or(Error::NotRegular { factor }))
        .collect::<Result<Vec<usize>>>()?;
    let adjacency: Vec<SymMatrix> = factors.iter().map(Graph::adjacency_matrix).collect();
    let seed = vec![1.0 / (n as f64).sqrt(); n];
    let basis = common_eigenbasis(&adjacency, Some(&seed), tol)?;

    let UniversalParams {
        alpha,
        beta,
        gamma,
        eta,
    } = *params;
    let nf = n as f64;
    // Diagonal shift shared by every eigenvalue of block j: beta times the
    // degree of any vertex of block j in the product.
    let shift: Vec<f64> = degrees
        .iter()
        .enumerate()
        .map(|(j, &r)| beta * (r + h.degree(j)) as f64 + gamma)
        .collect();

    let mut parts = Vec::with_capacity(2);

    // All-ones direction: r_j is exact, so C_1 is exact for integer params.
    let top: Vec<f64> = degrees
        .iter()
        .zip(&shift)
        .map(|(&r, s)| alpha * r as f64 + s + nf * eta)
        .collect();
    let blocks: Vec<SymMatrix> = top
        .iter()
        .map(|&v| SymMatrix::diagonal(&[v]))
        .collect::<Result<_>>()?;
    let decomps = top
        .iter()
        .map(|&v| EigenDecomposition::from_parts(vec![v], DMatrix::identity(1, 1)))
        .collect::<Result<_>>()?;
    let coupling = pattern_coupling(h, alpha, nf * eta)?;
    parts.push(ReductionPart {
        input: FiedlerInput::new(blocks, decomps, 1, coupling)?,
        lift: Some(basis.basis.columns(0, 1).into_owned()),
        t_offset: 0,
    });

    if n > 1 {
        let m = n - 1;
        let diagonals: Vec<Vec<f64>> = (0..factors.len())
            .map(|j| {
                (1..n)
                    .map(|i| alpha * basis.eigenvalue(i, j) + shift[j])
                    .collect()
            })
            .collect();
        let blocks: Vec<SymMatrix> = diagonals
            .iter()
            .map(|d| SymMatrix::diagonal(d))
            .collect::<Result<_>>()?;
        let decomps = diagonals
            .into_iter()
            .map(|d| EigenDecomposition::from_parts(d, DMatrix::identity(m, m)))
            .collect::<Result<_>>()?;
        let coupling = pattern_coupling(h, alpha, 0.0)?;
        parts.push(ReductionPart {
            input: FiedlerInput::new(blocks, decomps, m, coupling)?,
            lift: Some(basis.basis.columns(1, m).into_owned()),
            t_offset: 1,
        });
    }
    Ok(Reduction { basis, parts })
}

pub fn adjacency_spectrum_hproduct(
    h: &Graph,
    factors: &[Graph],
    tol: f64,
) -> Result<SpectrumReport> {
    let started = Instant::now();
    adjacency_reduction(h, factors, tol)?.report(started)
}

pub fn universal_spectrum_hproduct(
    h: &Graph,
    factors: &[Graph],
    params: &UniversalParams,
    tol: f64,
) -> Result<SpectrumReport> {
    let started = Instant::now();
    universal_reduction(h, factors, params, tol)?.report(started)
}

pub fn laplacian_spectrum_hproduct(
    h: &Graph,
    factors: &[Graph],
    tol: f64,
) -> Result<SpectrumReport> {
    universal_spectrum_hproduct(h, factors, &UniversalParams::LAPLACIAN, tol)
}

pub fn signless_laplacian_spectrum_hproduct(
    h: &Graph,
    factors: &[Graph],
    tol: f64,
) -> Result<SpectrumReport> {
    universal_spectrum_hproduct(h, factors, &UniversalParams::SIGNLESS_LAPLACIAN, tol)
}

pub fn seidel_spectrum_hproduct(h: &Graph, factors: &[Graph], tol: f64) -> Result<SpectrumReport> {
    universal_spectrum_hproduct(h, factors, &UniversalParams::SEIDEL, tol)
}

/// Builds the structured reduction matching the job's matrix kind.
pub fn reduction_for(job: &HProductJob, tol: f64) -> Result<Reduction> {
    match job.kind {
        MatrixKind::Adjacency => adjacency_reduction(&job.h, &job.factors, tol),
        kind => universal_reduction(&job.h, &job.factors, &kind.params(), tol),
    }
}

/// Structured spectrum of a job. Adjacency jobs go through the
/// commuting-only route; every other kind needs regular factors.
pub fn structured_spectrum(job: &HProductJob, tol: f64) -> Result<SpectrumReport> {
    let started = Instant::now();
    reduction_for(job, tol)?.report(started)
}

/// Ground truth: eigensolve the assembled `(n l) x (n l)` job matrix. Works
/// for any job, commuting or not.
pub fn dense_oracle_spectrum(job: &HProductJob) -> Result<Spectrum> {
    let values = eigvalsh(&job.matrix()?);
    Ok(Spectrum::from_values(&values, Provenance::Dense))
}

/// Pools the eigenvalues of a set of reduced matrices, eigensolving each.
pub fn pooled_from_reduced(matrices: &[SymMatrix]) -> Result<Spectrum> {
    let mut raw = Vec::new();
    for (i, m) in matrices.iter().enumerate() {
        let d = eigh(m)?;
        raw.extend(
            d.values
                .iter()
                .enumerate()
                .map(|(s, &v)| (v, Provenance::Reduced { t: i + 1, s: s + 1 })),
        );
    }
    Ok(Spectrum::new(raw, GROUPING_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{circulant, complete, cycle, empty, path};
    use crate::linalg::COMMUTE_TOL;

    fn example_h() -> Graph {
        Graph::from_edge_pairs(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    fn example_factors() -> Vec<Graph> {
        vec![
            complete(4).unwrap(),
            circulant(4, &[2]).unwrap(),
            cycle(4).unwrap(),
            complete(4).unwrap(),
        ]
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        let d = crate::spectrum::max_abs_diff(a, b).unwrap();
        assert!(d <= tol, "diff {d:e} > {tol:e}: {a:?} vs {b:?}");
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(
            MatrixKind::parse("seidel", None).unwrap(),
            MatrixKind::Seidel
        );
        assert!(MatrixKind::parse("universal", None).is_err());
        assert!(MatrixKind::parse("adjacency", Some([1.0; 4])).is_err());
        assert!(MatrixKind::parse("distance", None).is_err());
        assert_eq!(
            MatrixKind::parse("universal", Some([2.0, 1.0, 2.0, 1.0]))
                .unwrap()
                .params(),
            UniversalParams::new(2.0, 1.0, 2.0, 1.0)
        );
    }

    #[test]
    fn empty_pattern_gives_union_of_factor_spectra() {
        let factors = vec![circulant(6, &[1]).unwrap(), circulant(6, &[2, 3]).unwrap()];
        let report =
            adjacency_spectrum_hproduct(&empty(2).unwrap(), &factors, COMMUTE_TOL).unwrap();
        let mut union: Vec<f64> = factors
            .iter()
            .flat_map(|f| eigvalsh(&f.adjacency_matrix()))
            .collect();
        union.sort_by(|a, b| b.total_cmp(a));
        assert_close(&report.structured.values(), &union, 1e-10);
    }

    #[test]
    fn square_as_prism() {
        let k2 = complete(2).unwrap();
        let report =
            adjacency_spectrum_hproduct(&path(2).unwrap(), &[k2.clone(), k2], COMMUTE_TOL).unwrap();
        assert_close(&report.structured.values(), &[2.0, 0.0, 0.0, -2.0], 1e-12);
        assert_eq!(report.reduced_matrices.len(), 2);
    }

    #[test]
    fn example_adjacency_matches_oracle() {
        let job = HProductJob::new(example_h(), example_factors(), MatrixKind::Adjacency).unwrap();
        let mut report = structured_spectrum(&job, COMMUTE_TOL).unwrap();
        report.attach_oracle(&job).unwrap();
        assert!(report.max_abs_diff.unwrap() <= 1e-8);
        assert!(report.matches(1e-8));
    }

    #[test]
    fn example_universal_reduced_matrices() {
        let report = universal_spectrum_hproduct(
            &example_h(),
            &example_factors(),
            &UniversalParams::new(2.0, 1.0, 2.0, 1.0),
            COMMUTE_TOL,
        )
        .unwrap();
        let c1 = report.reduced_matrices[0].matrix.to_rows();
        assert_eq!(
            c1,
            vec![
                vec![17.0, 6.0, 6.0, 4.0],
                vec![6.0, 11.0, 6.0, 4.0],
                vec![6.0, 6.0, 15.0, 6.0],
                vec![4.0, 4.0, 6.0, 16.0],
            ]
        );
        let top = &report.reduced_matrices[0].eigenvalues;
        assert_close(top, &[31.0088, 12.6673, 9.0000, 6.3239], 1e-3);
    }

    #[test]
    fn lifted_eigenpairs_solve_the_full_matrix() {
        let job = HProductJob::new(
            example_h(),
            example_factors(),
            MatrixKind::Universal(UniversalParams::new(2.0, 1.0, 2.0, 1.0)),
        )
        .unwrap();
        let full = job.matrix().unwrap();
        let pairs = reduction_for(&job, COMMUTE_TOL)
            .unwrap()
            .eigenpairs()
            .unwrap();
        assert_eq!(pairs.len(), 16);
        let r = crate::fiedler::max_residual(&full, &pairs);
        assert!(r < 1e-10 * full.frobenius_norm(), "residual {r:e}");
    }

    #[test]
    fn universal_preconditions() {
        let h = path(2).unwrap();
        let reg = vec![cycle(4).unwrap(), complete(4).unwrap()];
        assert!(matches!(
            universal_spectrum_hproduct(&h, &reg, &UniversalParams::new(0.0, 1.0, 0.0, 0.0), 1e-10),
            Err(Error::AlphaZero)
        ));
        let irregular = vec![cycle(4).unwrap(), path(4).unwrap()];
        assert!(matches!(
            laplacian_spectrum_hproduct(&h, &irregular, 1e-10),
            Err(Error::NotRegular { factor: 1 })
        ));
        let mismatch = vec![cycle(4).unwrap(), cycle(5).unwrap()];
        assert!(matches!(
            adjacency_spectrum_hproduct(&h, &mismatch, 1e-10),
            Err(Error::OrderMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn non_commuting_factors_rejected() {
        let h = path(2).unwrap();
        let factors = vec![
            path(3).unwrap(),
            Graph::from_edge_pairs(3, &[(0, 2)]).unwrap(),
        ];
        let err = adjacency_spectrum_hproduct(&h, &factors, 1e-10).unwrap_err();
        assert!(matches!(
            err,
            Error::NotCommuting {
                first: 0,
                second: 1,
                ..
            }
        ));
        // The oracle still works.
        let job = HProductJob::new(h, factors, MatrixKind::Adjacency).unwrap();
        assert_eq!(dense_oracle_spectrum(&job).unwrap().len(), 6);
    }

    #[test]
    fn single_vertex_factors() {
        let h = path(3).unwrap();
        let factors = vec![empty(1).unwrap(); 3];
        let report = laplacian_spectrum_hproduct(&h, &factors, 1e-10).unwrap();
        assert_close(&report.structured.values(), &[3.0, 1.0, 0.0], 1e-12);
    }
}
