//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 model load or validation error,
//! 3 infeasible model, 4 distance method stopped before converging.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::{export_lp, load_model, render_solve, render_sweep, Format};
use crate::pareto::{self, ParetoError};
use crate::scalarize::{self, SolveError, SolveStatus, WeightVector, MAX_ORACLE_CALLS};
use crate::transform::transform;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MODEL: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mmstp", version, about = "Solve uncertain multi-objective solid transportation problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve with the weighted-sum or ideal-point distance method
    Solve(SolveArgs),
    /// Trace the frontier over an evenly spaced weight lattice
    Sweep(SweepArgs),
    /// Check a model file and report every problem found
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Weighted,
    Distance,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value = "weighted")]
    method: MethodArg,
    /// Comma-separated weights summing to 1 (weighted method)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<f64>>,
    /// Duality-gap tolerance (distance method)
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Oracle-call cap (distance method)
    #[arg(long, default_value_t = MAX_ORACLE_CALLS)]
    max_oracle_calls: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Override every confidence level (gamma, beta, delta) with this value
    #[arg(long)]
    confidence: Option<f64>,
    /// Also write the scalarized LP in CPLEX LP format
    #[arg(long)]
    export_lp: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    model: PathBuf,
    /// Lattice points per weight axis (at least 2)
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(2..))]
    steps: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Override every confidence level (gamma, beta, delta) with this value
    #[arg(long)]
    confidence: Option<f64>,
}

fn solve_exit(e: &SolveError) -> i32 {
    match e {
        SolveError::InvalidWeights(_) | SolveError::ObjectiveCount { .. } | SolveError::InvalidTolerance(_) => {
            EXIT_USAGE
        }
        SolveError::Infeasible | SolveError::Unbounded | SolveError::Lp(_) => EXIT_INFEASIBLE,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let command = &cli.command;
    let (model_path, confidence) = match command {
        Command::Solve(a) => (&a.model, a.confidence),
        Command::Sweep(a) => (&a.model, a.confidence),
        Command::Validate { model } => (model, None),
    };
    if let Some(c) = confidence {
        if !(c > 0.0 && c < 1.0) {
            let _ = writeln!(err, "error: --confidence must lie in (0,1), got {c}");
            return EXIT_USAGE;
        }
    }

    let mut model = match load_model(model_path) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_MODEL;
        }
    };
    if let Some(c) = confidence {
        for level in model.gamma.iter_mut().chain(&mut model.beta).chain(&mut model.delta) {
            *level = c;
        }
    }
    let det = match transform(&model) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_MODEL;
        }
    };

    match command {
        Command::Validate { .. } => {
            let _ = writeln!(
                out,
                "ok: {} routes, {} active columns, {} constraint rows",
                det.dims.route_count(),
                det.columns().len(),
                det.constraint_rows().len()
            );
            EXIT_OK
        }
        Command::Sweep(a) => match pareto::sweep(&det, a.steps as usize) {
            Ok(points) => {
                let _ = write!(out, "{}", render_sweep(&points, a.format.into()));
                EXIT_OK
            }
            Err(ParetoError::Solve(e)) => {
                let _ = writeln!(err, "error: {e}");
                solve_exit(&e)
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        Command::Solve(a) => {
            let k = det.objectives();
            let result = match a.method {
                MethodArg::Weighted => {
                    let Some(raw) = a.weights.clone() else {
                        let _ = writeln!(err, "error: --weights is required for the weighted method");
                        return EXIT_USAGE;
                    };
                    if raw.len() != k {
                        let _ = writeln!(err, "error: expected {k} weights, got {}", raw.len());
                        return EXIT_USAGE;
                    }
                    WeightVector::new(raw).and_then(|w| scalarize::solve_weighted(&det, &w))
                }
                MethodArg::Distance => {
                    if a.weights.is_some() {
                        let _ = writeln!(err, "error: --weights only applies to the weighted method");
                        return EXIT_USAGE;
                    }
                    scalarize::ideal_point(&det)
                        .and_then(|ideal| scalarize::solve_distance_capped(&det, &ideal, a.tol, a.max_oracle_calls))
                }
            };
            let report = match result {
                Ok(r) => r,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return solve_exit(&e);
                }
            };
            if let Some(path) = &a.export_lp {
                let weights = match &report.weights {
                    Some(w) => w.as_slice().to_vec(),
                    None => WeightVector::uniform(k).as_slice().to_vec(),
                };
                if let Err(e) = std::fs::write(path, export_lp(&det, &weights)) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_MODEL;
                }
            }
            let _ = write!(out, "{}", render_solve(&report, a.format.into()));
            if report.status == SolveStatus::IterationLimit {
                if let Some(d) = &report.diagnostic {
                    let _ = writeln!(err, "warning: {d}");
                }
                return EXIT_NOT_CONVERGED;
            }
            EXIT_OK
        }
    }
}
