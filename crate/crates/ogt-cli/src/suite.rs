//! Top-level run drivers shared by the binary and the integration tests:
//! load a scenario, run a command, write the artifacts, report the outcome.

use std::fs;
use std::path::{Path, PathBuf};

use crate::checks::{all_passed, run_suite};
use crate::converge::{run_converge, PipelineStudy};
use crate::error::Result;
use crate::report::RunReport;
use crate::residual_map::run_residual_map;
use crate::scenario::{load, LoadedScenario, Overrides};

/// Outcome of a driver run: the report (when the command produces one) and
/// whether every enforced check passed.
pub struct RunOutcome {
    pub report: Option<RunReport>,
    pub passed: bool,
    /// Files written, for logging.
    pub artifacts: Vec<PathBuf>,
}

fn ensure_out_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    Ok(())
}

fn write_report(report: &RunReport, out: &Path) -> Result<PathBuf> {
    let path = out.join("report.json");
    fs::write(&path, report.to_json())?;
    Ok(path)
}

/// `verify`: run the full check suite and write `report.json`.
pub fn verify(
    scenario_spec: &str,
    overrides: Overrides,
    tol_scale: f64,
    out: &Path,
) -> Result<RunOutcome> {
    let scenario = load(scenario_spec, overrides)?;
    let records = run_suite(&scenario, tol_scale)?;
    let passed = all_passed(&records);
    let report = RunReport::new(
        scenario.name.clone(),
        "verify",
        scenario.dim,
        scenario.seed,
        records,
    );
    ensure_out_dir(out)?;
    let path = write_report(&report, out)?;
    Ok(RunOutcome {
        report: Some(report),
        passed,
        artifacts: vec![path],
    })
}

/// `converge`: run the lattice refinement pipelines, write `report.json`
/// and `converge.csv`.
pub fn converge(
    scenario_spec: &str,
    overrides: Overrides,
    tol_scale: f64,
    out: &Path,
) -> Result<RunOutcome> {
    let scenario = load(scenario_spec, overrides)?;
    let studies = run_converge(&scenario)?;
    let records = studies.iter().map(|s| s.record(tol_scale)).collect();
    let report = RunReport::new(
        scenario.name.clone(),
        "converge",
        scenario.dim,
        scenario.seed,
        records,
    );
    let passed = report.all_passed();
    ensure_out_dir(out)?;
    let report_path = write_report(&report, out)?;
    let csv_path = out.join("converge.csv");
    write_converge_csv(&studies, &csv_path)?;
    Ok(RunOutcome {
        report: Some(report),
        passed,
        artifacts: vec![report_path, csv_path],
    })
}

fn write_converge_csv(studies: &[PipelineStudy], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(fs::File::create(path)?);
    w.write_record(["pipeline", "n", "h", "error"])
        .map_err(|e| crate::error::CliError::Io(std::io::Error::other(e)))?;
    for study in studies {
        for row in &study.rows {
            w.write_record([
                row.pipeline.to_string(),
                row.n.to_string(),
                format!("{}", row.h),
                format!("{}", row.error),
            ])
            .map_err(|e| crate::error::CliError::Io(std::io::Error::other(e)))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `residual-map`: write `residual-<check>.csv` for one check.
pub fn residual_map(
    scenario_spec: &str,
    overrides: Overrides,
    check_id: &str,
    grid_points: Option<usize>,
    out: &Path,
) -> Result<RunOutcome> {
    let scenario: LoadedScenario = load(scenario_spec, overrides)?;
    let map = run_residual_map(&scenario, check_id, grid_points)?;
    ensure_out_dir(out)?;
    let path = out.join(format!("residual-{check_id}.csv"));
    map.write_csv(fs::File::create(&path)?)?;
    Ok(RunOutcome {
        report: None,
        passed: true,
        artifacts: vec![path],
    })
}
