use hspec_core::bench::BenchReport;
use hspec_core::SpectrumReport;
use serde::Serialize;

/// Rounds to 12 significant digits so printed values do not churn in the
/// last ulp across platforms.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn sig12_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(sig12).collect()
}

#[derive(Serialize)]
pub struct GroupedValue {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct ReducedJson {
    pub t: usize,
    pub entries: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

#[derive(Serialize)]
pub struct TimingsJson {
    pub structured: f64,
    pub oracle: Option<f64>,
}

#[derive(Serialize)]
pub struct SpectrumJson {
    pub eigenvalues: Vec<f64>,
    pub grouped: Vec<GroupedValue>,
    pub reduced_matrices: Vec<ReducedJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_eigenvalues: Option<Vec<f64>>,
    pub max_abs_diff: Option<f64>,
    pub timings_ms: TimingsJson,
}

impl From<&SpectrumReport> for SpectrumJson {
    fn from(r: &SpectrumReport) -> Self {
        SpectrumJson {
            eigenvalues: sig12_all(&r.structured.values()),
            grouped: r
                .structured
                .entries()
                .iter()
                .map(|e| GroupedValue {
                    value: sig12(e.value),
                    multiplicity: e.multiplicity,
                })
                .collect(),
            reduced_matrices: r
                .reduced_matrices
                .iter()
                .map(|m| ReducedJson {
                    t: m.t,
                    entries: m
                        .matrix
                        .to_rows()
                        .iter()
                        .map(|row| sig12_all(row))
                        .collect(),
                    eigenvalues: sig12_all(&m.eigenvalues),
                })
                .collect(),
            oracle_eigenvalues: r.oracle.as_ref().map(|o| sig12_all(&o.values())),
            max_abs_diff: r.max_abs_diff.map(sig12),
            timings_ms: TimingsJson {
                structured: sig12(r.timings.structured.as_secs_f64() * 1e3),
                oracle: r.timings.oracle.map(|d| sig12(d.as_secs_f64() * 1e3)),
            },
        }
    }
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub matched: bool,
    pub tolerance: f64,
    pub max_abs_diff: f64,
}

#[derive(Serialize)]
pub struct BenchJson {
    pub n: usize,
    pub l: usize,
    pub trials: usize,
    pub seed: u64,
    pub structured_ms: f64,
    pub dense_ms: f64,
    pub ratio: f64,
    pub max_abs_diff: f64,
}

impl From<&BenchReport> for BenchJson {
    fn from(r: &BenchReport) -> Self {
        BenchJson {
            n: r.config.n,
            l: r.config.l,
            trials: r.config.trials,
            seed: r.config.seed,
            structured_ms: sig12(r.structured_ms),
            dense_ms: sig12(r.dense_ms),
            ratio: sig12(r.ratio),
            max_abs_diff: sig12(r.max_abs_diff),
        }
    }
}
