use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ogt_cli::error::{EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
use ogt_cli::report::{CheckStatus, RunReport};
use ogt_cli::scenario::Overrides;
use ogt_cli::{suite, CliError};

/// Operator gauge toolkit: verification suites, convergence studies, and
/// residual maps over scenario files.
#[derive(Parser)]
#[command(name = "ogt", version, about)]
struct Cli {
    /// Scenario file path, or the name of a bundled scenario.
    #[arg(long, global = true)]
    scenario: Option<String>,

    /// Directory receiving report.json and CSV artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Override the scenario's sampling seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the scenario's matrix dimension.
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// Multiply every check tolerance by this factor.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification suite and write a JSON report.
    Verify,
    /// Measure lattice refinement orders over the scenario's grid list.
    Converge,
    /// Write a per-site residual CSV for one check.
    ResidualMap {
        /// Check id to map (e.g. "bianchi", "eq17").
        check_id: String,
        /// Grid points per axis; defaults to the scenario's first grid.
        grid: Option<usize>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("OGT_NUM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| {
        CliError::input(format!(
            "OGT_NUM_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    if threads == 0 {
        return Err(CliError::input(
            "OGT_NUM_THREADS must be a positive integer, got '0'",
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::input(format!("could not configure {threads} threads: {e}")))
}

fn print_summary(report: &RunReport) {
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Info => "INFO",
        };
        match check.slope {
            Some(slope) => println!(
                "{status} {id} [{eq}] slope {slope:.3} (target 2.0 +/- {tol})",
                id = check.id,
                eq = check.equation,
                tol = check.tolerance,
            ),
            None => println!(
                "{status} {id} [{eq}] max residual {residual:.3e} vs {tol:.1e} * scale {scale:.3e}",
                id = check.id,
                eq = check.equation,
                residual = check.max_residual,
                tol = check.tolerance,
                scale = check.scale,
            ),
        }
    }
    println!(
        "overall: {}",
        if report.all_passed() { "PASS" } else { "FAIL" }
    );
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let scenario = cli
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::input("--scenario <path-or-bundled-name> is required"))?;
    let overrides = Overrides {
        seed: cli.seed,
        dim: cli.dim,
    };
    if !cli.tol_scale.is_finite() || cli.tol_scale <= 0.0 {
        return Err(CliError::input("--tol-scale must be finite and positive"));
    }

    let outcome = match &cli.command {
        Command::Verify => suite::verify(scenario, overrides, cli.tol_scale, &cli.out)?,
        Command::Converge => suite::converge(scenario, overrides, cli.tol_scale, &cli.out)?,
        Command::ResidualMap { check_id, grid } => {
            suite::residual_map(scenario, overrides, check_id, *grid, &cli.out)?
        }
    };

    if let Some(report) = &outcome.report {
        print_summary(report);
    }
    for artifact in &outcome.artifacts {
        println!("wrote {}", artifact.display());
    }
    Ok(if outcome.passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own diagnostics; map usage errors onto the
            // input-error exit status and keep --help/--version at success.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::from(EXIT_OK)
                }
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
