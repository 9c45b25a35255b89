use std::fs;
use std::path::{Path, PathBuf};

use hspec_core::graphs::parse_edge_list;
use hspec_core::spectra::ORACLE_TOL;
use hspec_core::{Error, Graph, HProductJob, MatrixKind};
use serde::Deserialize;

use crate::CliError;

/// On-disk job description. Graph paths are resolved relative to the job
/// file's directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub h: PathBuf,
    pub factors: Vec<PathBuf>,
    pub matrix: String,
    #[serde(default)]
    pub params: Option<[f64; 4]>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_oracle")]
    pub oracle: bool,
}

fn default_tolerance() -> f64 {
    ORACLE_TOL
}

fn default_oracle() -> bool {
    true
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| match e {
        Error::Parse { line, message } => {
            CliError::parse(format!("{}:{line}: {message}", path.display()))
        }
        other => CliError::from(other),
    })
}

pub struct LoadedJob {
    pub job: HProductJob,
    pub oracle: bool,
}

pub fn load_job(path: &Path) -> Result<LoadedJob, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let config: JobConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{}:{}: {e}", path.display(), e.line())))?;
    if !(config.tolerance.is_finite() && config.tolerance >= 0.0) {
        return Err(CliError::parse(format!(
            "{}: tolerance must be a non-negative number",
            path.display()
        )));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let h = read_graph(&base.join(&config.h))?;
    if config.factors.len() != h.order() {
        return Err(CliError::from(Error::FactorCountMismatch {
            expected: h.order(),
            actual: config.factors.len(),
        }));
    }
    let factors = config
        .factors
        .iter()
        .map(|f| read_graph(&base.join(f)))
        .collect::<Result<Vec<_>, _>>()?;
    let kind = MatrixKind::parse(&config.matrix, config.params)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let job = HProductJob::new(h, factors, kind)?.with_tolerance(config.tolerance);
    Ok(LoadedJob {
        job,
        oracle: config.oracle,
    })
}
