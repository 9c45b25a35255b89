use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hspec_cli::{cmd_bench, cmd_product, cmd_spectrum, cmd_verify, CliError, Output};
use hspec_core::bench::BenchConfig;

/// Spectra of H-products of commuting graphs.
///
/// Graph files use a plain edge-list format: the first non-comment line is
/// the vertex count n, each further line is "u v" with 0 <= u < v < n
/// (vertices are 0-based). '#' starts a comment.
#[derive(Parser)]
#[command(name = "hspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the spectrum described by a JSON job file.
    Spectrum {
        #[arg(long)]
        job: PathBuf,
        /// Skip the dense oracle even if the job asks for it.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Write the H-product of the given graphs as an edge list.
    Product {
        #[arg(long = "H")]
        h: PathBuf,
        /// Comma-separated factor files, one per vertex of H.
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the structured spectrum with the dense oracle.
    Verify {
        #[arg(long)]
        job: PathBuf,
        #[arg(long, hide = true)]
        perturb: Option<f64>,
    },
    /// Time the structured path against the dense oracle on random
    /// circulant jobs.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Spectrum { job, no_oracle } => cmd_spectrum(&job, no_oracle),
        Command::Product { h, factors, out } => {
            let paths: Vec<&Path> = factors.iter().map(PathBuf::as_path).collect();
            cmd_product(&h, &paths, &out)
        }
        Command::Verify { job, perturb } => cmd_verify(&job, perturb),
        Command::Bench { n, l, trials, seed } => cmd_bench(BenchConfig { n, l, trials, seed }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error:usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            if !out.stdout.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code as u8)
        }
    }
}
