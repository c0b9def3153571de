//! Command-line front end for the game bounds, simulation and
//! incompatibility checks.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a
//! computation or write fails, 2 on invalid usage.

mod commands;
mod grid;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grid::{parse_real, Grid};

#[derive(Parser)]
#[command(name = "ctxgame", version, about = "Bounds and certificates for a qubit prepare-and-measure game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum and noncontextual values along the slice α₁ = α₂ = (2 − α₀)/2.
    Curve {
        /// Grid `start:stop:step` for α₀.
        #[arg(long, value_parser = parse_grid, conflicts_with = "alpha0")]
        grid: Option<Grid>,
        /// Explicit α₀ values (decimals or fractions such as 2/3).
        #[arg(long, value_parser = parse_alpha0, value_delimiter = ',')]
        alpha0: Vec<f64>,
        /// Append the constant classical column `p_c`.
        #[arg(long)]
        classical: bool,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Quantum, noncontextual and classical values at one α₀.
    Bounds {
        #[arg(long, value_parser = parse_alpha0, default_value = "2/3")]
        alpha0: f64,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimizer gain tolerance per alternation round.
        #[arg(long, value_parser = parse_tol)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Simulation of the n-outcome equatorial POVM and extremality checks.
    Simulate {
        #[arg(long, default_value_t = 5, value_parser = parse_odd)]
        n: usize,
        /// Residual tolerance.
        #[arg(long, value_parser = parse_tol)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Guessing-probability witness and polygon joint-measurability checks.
    Incompat {
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(3..))]
        polygon_k: u64,
        /// Resolution of the noise-threshold bisection.
        #[arg(long, value_parser = parse_tol)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Coherence classification of the trine and degenerate POVMs.
    Coherence {
        #[arg(long, value_parser = parse_tol)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_grid(text: &str) -> Result<Grid, String> {
    text.parse()
}

fn parse_alpha0(text: &str) -> Result<f64, String> {
    let v = parse_real(text)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("alpha0 must lie in [0, 1], got {v}"))
    }
}

fn parse_tol(text: &str) -> Result<f64, String> {
    let v = parse_real(text)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("tolerance must be positive, got {v}"))
    }
}

fn parse_odd(text: &str) -> Result<usize, String> {
    let n: usize = text.parse().map_err(|_| format!("'{text}' is not a positive integer"))?;
    if n >= 3 && n % 2 == 1 {
        Ok(n)
    } else {
        Err(format!("n must be odd and at least 3, got {n}"))
    }
}

fn emit(output: &Output, text: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (report, output) = match cli.command {
        Command::Curve {
            grid,
            alpha0,
            classical,
            restarts,
            seed,
            output,
        } => {
            let points = if alpha0.is_empty() { grid.unwrap_or_default().points() } else { alpha0 };
            let rows = commands::curve(&points, restarts as usize, seed)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => commands::curve_csv(&rows, classical),
                Format::Json => commands::curve_json(&rows, classical),
            };
            emit(&output, &text)?;
            return Ok(true);
        }
        Command::Bounds {
            alpha0,
            restarts,
            seed,
            tol,
            output,
        } => (commands::bounds(alpha0, restarts as usize, seed, tol)?, output),
        Command::Simulate { n, tol, output } => (commands::simulate(n, tol)?, output),
        Command::Incompat { polygon_k, tol, output } => (commands::incompat(polygon_k as usize, tol)?, output),
        Command::Coherence { tol, output } => (commands::coherence(tol)?, output),
    };
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&output, &text)?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
