//! Command implementations behind the `hspec` binary.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 a hypothesis of the reduction
//! failed, 3 the structured result disagrees with the dense oracle. Errors
//! are printed as a single line `error:<kind>: <message>`.

pub mod job;
pub mod report;

use std::fmt;
use std::fs;
use std::path::Path;

use hspec_core::bench::{run_bench, BenchConfig};
use hspec_core::graphs::{h_product, to_edge_list};
use hspec_core::linalg::COMMUTE_TOL;
use hspec_core::spectra::{pooled_from_reduced, structured_spectrum};
use hspec_core::spectrum::compare_spectra;
use hspec_core::{Error, SymMatrix};

use crate::job::{load_job, read_graph};
use crate::report::{sig12, BenchJson, SpectrumJson, VerifyJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn io(message: String) -> Self {
        CliError {
            kind: "io".into(),
            message,
            code: EXIT_INPUT,
        }
    }

    pub fn parse(message: String) -> Self {
        CliError {
            kind: "parse".into(),
            message,
            code: EXIT_INPUT,
        }
    }

    pub fn mismatch(message: String) -> Self {
        CliError {
            kind: "mismatch".into(),
            message,
            code: EXIT_MISMATCH,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            kind: e.kind().into(),
            message: e.to_string(),
            code: if e.is_precondition() {
                EXIT_PRECONDITION
            } else {
                EXIT_INPUT
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message.replace('\n', " ");
        write!(f, "error:{}: {}", self.kind, one_line)
    }
}

/// Successful command output. `code` is nonzero when the command ran but
/// the oracle disagreed.
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn cmd_spectrum(job_path: &Path, no_oracle: bool) -> Result<Output, CliError> {
    let loaded = load_job(job_path)?;
    let job = &loaded.job;
    let mut report = structured_spectrum(job, COMMUTE_TOL)?;
    if loaded.oracle && !no_oracle {
        report.attach_oracle(job)?;
    }
    let code = if report.matches(job.tolerance) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    Ok(Output {
        stdout: to_json(&SpectrumJson::from(&report)),
        code,
    })
}

/// Runs both paths and compares them. `perturb` adds the given amount to the
/// first diagonal entry of `C_1` before pooling, as a negative control.
pub fn cmd_verify(job_path: &Path, perturb: Option<f64>) -> Result<Output, CliError> {
    let loaded = load_job(job_path)?;
    let job = &loaded.job;
    let mut report = structured_spectrum(job, COMMUTE_TOL)?;
    if let Some(delta) = perturb {
        let mut matrices: Vec<SymMatrix> = report
            .reduced_matrices
            .iter()
            .map(|r| r.matrix.clone())
            .collect();
        let mut first = matrices[0].as_matrix().clone();
        first[(0, 0)] += delta;
        matrices[0] = SymMatrix::new(first)?;
        report.structured = pooled_from_reduced(&matrices)?;
    }
    report.attach_oracle(job)?;
    let oracle = report.oracle.as_ref().expect("oracle attached");
    let (matched, diff) = compare_spectra(&report.structured, oracle, job.tolerance)?;
    Ok(Output {
        stdout: to_json(&VerifyJson {
            matched,
            tolerance: job.tolerance,
            max_abs_diff: sig12(diff),
        }),
        code: if matched { EXIT_OK } else { EXIT_MISMATCH },
    })
}

pub fn cmd_product(h_path: &Path, factor_paths: &[&Path], out: &Path) -> Result<Output, CliError> {
    let h = read_graph(h_path)?;
    let factors = factor_paths
        .iter()
        .map(|p| read_graph(p))
        .collect::<Result<Vec<_>, _>>()?;
    let g = h_product(&h, &factors)?;
    fs::write(out, to_edge_list(&g))
        .map_err(|e| CliError::io(format!("{}: {e}", out.display())))?;
    Ok(Output {
        stdout: format!(
            "wrote {} ({} vertices, {} edges)\n",
            out.display(),
            g.order(),
            g.edge_count()
        ),
        code: EXIT_OK,
    })
}

pub fn cmd_bench(config: BenchConfig) -> Result<Output, CliError> {
    let report = run_bench(config)?;
    Ok(Output {
        stdout: to_json(&BenchJson::from(&report)),
        code: EXIT_OK,
    })
}
