//! Eigenvalue multisets with provenance.

use std::fmt;

use crate::error::{Error, Result};

/// Default absolute tolerance for grouping equal eigenvalues.
pub const GROUPING_TOL: f64 = 1e-8;

/// Where an eigenvalue came from. All indices are 1-based, matching the
/// `t` argument of [`crate::fiedler::reduced_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// The `index`-th eigenpair of block `block`, untouched by the coupling.
    Leftover { block: usize, index: usize },
    /// The `s`-th eigenvalue (descending) of the reduced matrix `C_t`.
    Reduced { t: usize, s: usize },
    /// Computed by a dense eigensolve of the full matrix.
    Dense,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Leftover { block, index } => write!(f, "leftover({block},{index})"),
            Provenance::Reduced { t, s } => write!(f, "reduced({t},{s})"),
            Provenance::Dense => f.write_str("dense"),
        }
    }
}

/// A distinct eigenvalue with its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: usize,
    pub sources: Vec<Provenance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    raw: Vec<(f64, Provenance)>,
    entries: Vec<SpectrumEntry>,
    tolerance: f64,
}

impl Spectrum {
    /// Sorts the raw values descending and groups runs whose members lie
    /// within `tolerance` of the run's first (largest) value.
    pub fn new(mut raw: Vec<(f64, Provenance)>, tolerance: f64) -> Self {
        raw.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        for &(value, source) in &raw {
            match entries.last_mut() {
                Some(e) if e.value - value <= tolerance => {
                    e.multiplicity += 1;
                    e.sources.push(source);
                }
                _ => entries.push(SpectrumEntry {
                    value,
                    multiplicity: 1,
                    sources: vec![source],
                }),
            }
        }
        Spectrum {
            raw,
            entries,
            tolerance,
        }
    }

    pub fn from_values(values: &[f64], source: Provenance) -> Self {
        Self::new(values.iter().map(|&v| (v, source)).collect(), GROUPING_TOL)
    }

    /// Raw eigenvalues, descending.
    pub fn values(&self) -> Vec<f64> {
        self.raw.iter().map(|r| r.0).collect()
    }

    pub fn raw(&self) -> &[(f64, Provenance)] {
        &self.raw
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Total multiplicity.
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Number of raw values within `tol` of `value`.
    pub fn multiplicity_near(&self, value: f64, tol: f64) -> usize {
        self.raw
            .iter()
            .filter(|r| (r.0 - value).abs() <= tol)
            .count()
    }

    pub fn sum(&self) -> f64 {
        self.raw.iter().map(|r| r.0).sum()
    }
}

/// L-infinity distance of the two sorted raw lists, and whether it is within
/// `tol`.
pub fn compare_spectra(a: &Spectrum, b: &Spectrum, tol: f64) -> Result<(bool, f64)> {
    let diff = max_abs_diff(&a.values(), &b.values())?;
    Ok((diff <= tol, diff))
}

/// L-infinity distance between two value lists after sorting both
/// descending.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::MultiplicityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_within_tolerance() {
        let s = Spectrum::from_values(
            &[1.0, 3.0, 1.0 + 1e-10, -1.0, 1.0 - 5e-9],
            Provenance::Dense,
        );
        assert_eq!(s.len(), 5);
        let mults: Vec<usize> = s.entries().iter().map(|e| e.multiplicity).collect();
        assert_eq!(mults, vec![1, 3, 1]);
        assert_eq!(s.entries()[1].value, 1.0 + 1e-10);
        assert_eq!(s.values()[0], 3.0);
    }

    #[test]
    fn grouping_is_anchored_at_representative() {
        // A chain 0, -0.6e-8, -1.2e-8 must not collapse into one entry.
        let s = Spectrum::from_values(&[0.0, -0.6e-8, -1.2e-8], Provenance::Dense);
        assert_eq!(s.entries().len(), 2);
        for e in s.entries() {
            assert!(e.multiplicity >= 1);
        }
    }

    #[test]
    fn compare_identical() {
        let s = Spectrum::from_values(&[1.0, 2.0, 3.0], Provenance::Dense);
        assert_eq!(compare_spectra(&s, &s, 0.0).unwrap(), (true, 0.0));
    }

    #[test]
    fn compare_small_difference() {
        let a = Spectrum::from_values(&[1.0, 2.0, 3.0], Provenance::Dense);
        let b = Spectrum::from_values(&[1.0, 2.0, 3.0000001], Provenance::Dense);
        let (ok, diff) = compare_spectra(&a, &b, 1e-6).unwrap();
        assert!(ok);
        assert!((diff - 1e-7).abs() < 1e-12);
        let (ok, _) = compare_spectra(&a, &b, 1e-8).unwrap();
        assert!(!ok);
    }

    #[test]
    fn compare_size_mismatch() {
        let a = Spectrum::from_values(&[1.0, 2.0], Provenance::Dense);
        let b = Spectrum::from_values(&[1.0], Provenance::Dense);
        assert!(matches!(
            compare_spectra(&a, &b, 1.0),
            Err(Error::MultiplicityMismatch { left: 2, right: 1 })
        ));
    }
}
