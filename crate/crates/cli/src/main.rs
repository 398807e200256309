//! `hyperpack`: validate triangulations, evaluate packings and curvatures,
//! certify rigidity, solve for prescribed curvature, and run the seeded
//! property suites.
//!
//! Exit status is 0 on success, 1 when a computation fails (including a
//! failing `verify` or a non-converged `solve`), and 2 on bad input.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperpack_core::report;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hyperpack",
    version,
    about = "Generalized Thurston sphere packings on 3-manifolds with boundary"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a triangulation document and report edge stars and degrees.
    Validate(Common),
    /// Edge lengths and per-tet status for given weights and radii.
    Lengths(Common),
    /// Nondegeneracy of every tet.
    Check(Common),
    /// Edge and vertex curvatures, with link checks when available.
    Curvature(Common),
    /// The curvature Hessian and its two terms.
    Hessian(Common),
    /// Rigidity certificate at the given radii.
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Scalar)]
        mode: Mode,
    },
    /// Newton solve for radii realizing a prescribed vertex curvature.
    Solve {
        #[command(flatten)]
        common: Common,
        /// JSON file with the target curvature (an array, or `{"target": [...]}`).
        #[arg(long)]
        target: PathBuf,
        /// Residual tolerance on the max-norm of `K - target`.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
    /// Boundary points of the degenerate region at one apex of a tet.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Apex vertex slot (0..4) inside the tet.
        #[arg(long)]
        apex: usize,
        #[arg(long, default_value_t = 0)]
        tet: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Relative volume of every tet against reference radii.
    Volume {
        #[command(flatten)]
        common: Common,
        /// Radii file for the reference state.
        #[arg(long)]
        reference: PathBuf,
        #[arg(long, default_value_t = hyperpack_core::trunctet::DEFAULT_STEPS)]
        steps: usize,
    },
    /// Run every registered property suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Common {
    /// Triangulation document (JSON); may carry inline weights and radii.
    #[arg(long)]
    triangulation: PathBuf,
    /// Weights file, overriding inline weights.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Radii file, overriding inline radii.
    #[arg(long)]
    radii: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit CSV instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Scalar,
    Ricci,
}

/// Failure classes, mapped to exit codes 2 and 1.
#[derive(Debug)]
enum Failure {
    Input(String),
    Compute(String),
}

impl From<hyperpack_core::Error> for Failure {
    fn from(e: hyperpack_core::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

/// A finished report. `ok` is false when the command ran but its outcome is
/// a failure (a failing suite, a non-converged solve).
struct Report {
    json: String,
    table: Table,
    ok: bool,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn new<T: serde::Serialize>(value: &T, table: Table) -> Self {
        Self {
            json: report::to_json(value),
            table,
            ok: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, result) = run(cli.command);
    let report = match result {
        Ok(r) => r,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = emit(&report, output) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(command: Command) -> (Output, Result<Report, Failure>) {
    match command {
        Command::Validate(c) => {
            let r = input::triangulation(&c.triangulation).and_then(|t| commands::validate(&t));
            (c.output, r)
        }
        Command::Lengths(c) => with_state(c, commands::lengths),
        Command::Check(c) => with_state(c, commands::check),
        Command::Curvature(c) => with_state(c, commands::curvature),
        Command::Hessian(c) => with_state(c, commands::hessian),
        Command::Certify { common, mode } => {
            let mode = match mode {
                Mode::Scalar => hyperpack_core::curvature::CertificateMode::Scalar,
                Mode::Ricci => hyperpack_core::curvature::CertificateMode::Ricci,
            };
            with_state(common, |s| commands::certify(s, mode))
        }
        Command::Solve {
            common,
            target,
            tol,
            max_iterations,
        } => {
            let target = input::target(&target);
            with_state(common, |s| commands::solve(s, target?, tol, max_iterations))
        }
        Command::Sample {
            common,
            apex,
            tet,
            seed,
            samples,
        } => {
            let loaded =
                input::Loaded::read(&common.triangulation, common.weights.as_deref(), None);
            let r = loaded.and_then(|l| commands::sample(&l, apex, tet, seed, samples as usize));
            (common.output, r)
        }
        Command::Volume {
            common,
            reference,
            steps,
        } => {
            let reference = input::radii(&reference);
            with_state(common, |s| commands::volume(s, &reference?, steps))
        }
        Command::Verify {
            seed,
            samples,
            output,
        } => (output, Ok(commands::verify(seed, samples as usize))),
    }
}

fn with_state(
    c: Common,
    f: impl FnOnce(&hyperpack_core::curvature::MetricState) -> Result<Report, Failure>,
) -> (Output, Result<Report, Failure>) {
    let r = input::Loaded::read(&c.triangulation, c.weights.as_deref(), c.radii.as_deref())
        .and_then(|l| l.with_state(f));
    (c.output, r)
}

fn emit(report: &Report, output: Output) -> Result<(), String> {
    let text = if output.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&report.table.header)
            .map_err(|e| e.to_string())?;
        for row in &report.table.rows {
            w.write_record(row).map_err(|e| e.to_string())?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())?
    } else {
        report.json.clone()
    };
    match output.out {
        Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}
