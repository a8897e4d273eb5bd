//! `bregcc`: Bregman circumcenters from JSON problem files.
//!
//! Exit codes: 0 when the problem was computed (an empty answer included),
//! 1 for input errors, 2 for solver failures.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod json;
mod plot;
mod problem;
mod run;
mod suite;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bregman_cc::PointSet;
use clap::{Parser, Subcommand};

use problem::ProblemFile;
use run::{execute, Overrides, EXIT_INPUT, EXIT_OK};

#[derive(Parser)]
#[command(name = "bregcc", version, about = "Backward and forward Bregman circumcenters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Seed for the forward circumcenter restarts.
        #[arg(long)]
        seed: Option<u64>,
        /// Equidistance tolerance used to verify the answer.
        #[arg(long)]
        tol: Option<f64>,
        /// Also write Bregman-ball samples to `<output stem>.balls.csv`.
        #[arg(long)]
        emit_plot: bool,
    },
    /// Solve every `*.json` problem in a directory and check expectations.
    Suite {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve { input, output, seed, tol, emit_plot } => solve(&input, &output, Overrides { seed, tol }, emit_plot),
        Command::Suite { input, output, seed, tol } => suite_command(&input, &output, Overrides { seed, tol }),
    };
    match code {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("bregcc: {e:#}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}

pub fn plot_path(output: &Path) -> PathBuf {
    output.with_extension("balls.csv")
}

fn solve(input: &Path, output: &Path, overrides: Overrides, emit_plot: bool) -> anyhow::Result<i32> {
    let text = fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
    let problem = ProblemFile::parse(&text).map_err(anyhow::Error::msg)?;
    let result = execute(&problem, overrides);
    fs::write(output, result.to_json()).with_context(|| format!("cannot write {}", output.display()))?;
    if let Some(e) = &result.error {
        eprintln!("bregcc: {e}");
        return Ok(result.exit_code);
    }
    if emit_plot || problem.options.emit_plot {
        match (problem.operation.mode(), result.raw_points.first()) {
            (Some(mode), Some(center)) if result.status != run::Status::Flat => {
                let f = bregman_cc::LegendreFunction::by_name(&problem.function, problem.dim())?;
                let s = PointSet::new(problem.points.clone())?;
                let rows = plot::ball_rows(&f, &s, center, mode)?;
                plot::write_csv(&plot_path(output), s.dim(), &rows)?;
            }
            _ => eprintln!("bregcc: no circumcenter to plot balls around"),
        }
    }
    Ok(result.exit_code)
}

fn suite_command(input: &Path, output: &Path, overrides: Overrides) -> anyhow::Result<i32> {
    let files = suite::problem_files(input)?;
    if files.is_empty() {
        anyhow::bail!("no problem files in {}", input.display());
    }
    let report = suite::run_suite(&files, overrides);
    let text = serde_json::to_string_pretty(&report)? + "\n";
    fs::write(output, text).with_context(|| format!("cannot write {}", output.display()))?;
    for f in report.files.iter().filter(|f| !f.pass) {
        eprintln!("FAIL {}: {}", f.file, f.reason.as_deref().unwrap_or(""));
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    Ok(if report.failed == 0 { EXIT_OK } else { 1 })
}
