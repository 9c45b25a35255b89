//! Timing harness: structured H-product spectrum against the dense oracle.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generate::{random_circulant_family, random_graph};
use crate::linalg::COMMUTE_TOL;
use crate::spectra::{adjacency_spectrum_hproduct, dense_oracle_spectrum, HProductJob, MatrixKind};
use crate::spectrum::compare_spectra;

/// Dense matrices above this dimension are refused.
pub const MAX_DENSE_DIMENSION: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    /// Factor order.
    pub n: usize,
    /// Pattern graph order.
    pub l: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    /// Mean wall time of the structured path, milliseconds.
    pub structured_ms: f64,
    /// Mean wall time of the dense oracle, milliseconds.
    pub dense_ms: f64,
    /// `dense_ms / structured_ms`.
    pub ratio: f64,
    /// Structured-vs-dense distance on the first trial.
    pub max_abs_diff: f64,
}

/// Random adjacency job over circulant factors: `l` factors of order `n`
/// with up to three steps each, pattern graph `G(l, 1/2)`.
pub fn random_circulant_job(n: usize, l: usize, rng: &mut ChaCha8Rng) -> Result<HProductJob> {
    let h = random_graph(l, 0.5, rng);
    let factors = random_circulant_family(n, l, 3, rng);
    HProductJob::new(h, factors, MatrixKind::Adjacency)
}

pub fn run_bench(config: BenchConfig) -> Result<BenchReport> {
    let BenchConfig { n, l, trials, seed } = config;
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be >= 1".into()));
    }
    if n < 2 || l == 0 {
        return Err(Error::InvalidInput(format!(
            "need n >= 2 and l >= 1, got n = {n}, l = {l}"
        )));
    }
    if n.saturating_mul(l) > MAX_DENSE_DIMENSION {
        return Err(Error::InvalidInput(format!(
            "n * l = {} exceeds the dense limit {MAX_DENSE_DIMENSION}",
            n.saturating_mul(l)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut structured_total = 0.0;
    let mut dense_total = 0.0;
    let mut first_diff = None;
    for _ in 0..trials {
        let job = random_circulant_job(n, l, &mut rng)?;
        let start = Instant::now();
        let report = adjacency_spectrum_hproduct(&job.h, &job.factors, COMMUTE_TOL)?;
        structured_total += start.elapsed().as_secs_f64();
        let start = Instant::now();
        let oracle = dense_oracle_spectrum(&job)?;
        dense_total += start.elapsed().as_secs_f64();
        if first_diff.is_none() {
            first_diff = Some(compare_spectra(&report.structured, &oracle, 0.0)?.1);
        }
    }
    let structured_ms = 1e3 * structured_total / trials as f64;
    let dense_ms = 1e3 * dense_total / trials as f64;
    Ok(BenchReport {
        config,
        structured_ms,
        dense_ms,
        ratio: dense_ms / structured_ms,
        max_abs_diff: first_diff.unwrap_or(0.0),
    })
}
