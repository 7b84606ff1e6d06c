//! Per-site residual maps: evaluate a check's defining comparison on every
//! site of a lattice grid and emit the result as CSV for offline plotting.

use ogt_core::maxwell::{
    classical_reduction_pairs, current_bracket_identity, current_covariance_pairs,
    decomposition_pairs, homogeneous_pairs, real_conservation_pair, total_conservation_pair,
    virtual_conservation_pair,
};
use ogt_core::polarization::strength_consistency_pairs;
use ogt_core::strength::{covariance_pairs, equivalence_pairs, pure_gauge_flatness_pairs};
use ogt_core::{
    abelian_reduction, energy_covariance, ExprPair, GaugeTransformation, LatticeField, LatticeGrid,
};

use crate::error::{CliError, Result};
use crate::scenario::LoadedScenario;

/// Check ids a residual map can be drawn for.
pub const MAP_IDS: &[&str] = &[
    "abelian-reduction",
    "bianchi",
    "classical-reduction",
    "current-covariance",
    "current-decomposition",
    "energy-covariance",
    "eq17",
    "magnetization-consistency",
    "polarization-consistency",
    "pure-gauge-flatness",
    "real-conservation",
    "strength-covariance",
    "strength-equivalence",
    "total-conservation",
    "virtual-conservation",
];

fn require_transformation<'a>(
    scenario: &'a LoadedScenario,
    check_id: &str,
) -> Result<&'a GaugeTransformation<f64>> {
    scenario.transformation.as_ref().ok_or_else(|| {
        CliError::input(format!(
            "check '{check_id}' needs a generator, and the scenario defines none"
        ))
    })
}

/// The comparisons a check id stands for. `eq17` returns two families: the
/// enforced combined form and the printed split form, mapped side by side.
fn pair_families(scenario: &LoadedScenario, check_id: &str) -> Result<Vec<Vec<ExprPair<f64>>>> {
    let a = &scenario.potential;
    let constants = scenario.constants;
    let single = |pairs: Vec<ExprPair<f64>>| vec![pairs];
    match check_id {
        "strength-equivalence" => Ok(single(
            equivalence_pairs(a, &constants)?
                .into_iter()
                .map(|(_, _, p)| p)
                .collect(),
        )),
        "bianchi" => Ok(single(
            homogeneous_pairs(a, &constants)?
                .into_iter()
                .map(|(_, p)| p)
                .collect(),
        )),
        "total-conservation" => Ok(single(vec![total_conservation_pair(a, &constants)?])),
        "real-conservation" => Ok(single(vec![real_conservation_pair(a, &constants)?])),
        "virtual-conservation" => Ok(single(vec![virtual_conservation_pair(a, &constants)?])),
        "current-decomposition" => Ok(single(
            decomposition_pairs(a, &constants)?
                .into_iter()
                .map(|(_, p)| p)
                .collect(),
        )),
        "classical-reduction" => Ok(single(
            classical_reduction_pairs(a, &constants)?
                .into_iter()
                .map(|(_, p)| p)
                .collect(),
        )),
        "polarization-consistency" | "magnetization-consistency" => {
            let kind = if check_id.starts_with("polarization") {
                "electric"
            } else {
                "magnetic"
            };
            Ok(single(
                strength_consistency_pairs(a, &constants)?
                    .into_iter()
                    .filter(|(k, _, _)| *k == kind)
                    .map(|(_, _, p)| p)
                    .collect(),
            ))
        }
        "eq17" => {
            let identity = current_bracket_identity(a, &constants)?;
            Ok(vec![vec![identity.combined], vec![identity.split]])
        }
        "strength-covariance" => {
            let gt = require_transformation(scenario, check_id)?;
            Ok(single(
                covariance_pairs(a, gt)?
                    .into_iter()
                    .map(|(_, _, p)| p)
                    .collect(),
            ))
        }
        "pure-gauge-flatness" => {
            let gt = require_transformation(scenario, check_id)?;
            Ok(single(
                pure_gauge_flatness_pairs(gt)?
                    .into_iter()
                    .map(|(_, _, p)| p)
                    .collect(),
            ))
        }
        "current-covariance" => {
            let gt = require_transformation(scenario, check_id)?;
            Ok(single(
                current_covariance_pairs(a, gt)?
                    .into_iter()
                    .map(|(_, p)| p)
                    .collect(),
            ))
        }
        "energy-covariance" => {
            let gt = require_transformation(scenario, check_id)?;
            let h = ogt_core::corpus::random_observable(
                scenario.dim,
                ogt_core::corpus::sub_seed(scenario.seed, 8),
            );
            Ok(single(vec![energy_covariance(&h, a, gt)?]))
        }
        "abelian-reduction" => {
            let gt = require_transformation(scenario, check_id)?;
            let mut pairs = Vec::with_capacity(4);
            for mu in 0..4 {
                pairs.push(abelian_reduction(a, gt, mu)?);
            }
            Ok(single(pairs))
        }
        other => Err(CliError::input(format!(
            "unknown check id '{other}'; valid ids: {}",
            MAP_IDS.join(", ")
        ))),
    }
}

/// A residual map ready for CSV emission: one residual column per family.
pub struct ResidualMap {
    pub grid: LatticeGrid<f64>,
    pub columns: Vec<&'static str>,
    /// Row-major over sites; one entry per column.
    pub values: Vec<Vec<f64>>,
}

/// Per-site worst `||lhs - rhs||` over a family of comparisons.
fn family_map(family: &[ExprPair<f64>], grid: &LatticeGrid<f64>) -> Result<Vec<f64>> {
    let mut worst = vec![0.0_f64; grid.site_count()];
    for pair in family {
        let lhs = LatticeField::sample(&pair.lhs, grid)?;
        let rhs = LatticeField::sample(&pair.rhs, grid)?;
        let diff = lhs.sub(&rhs)?;
        for (site, value) in diff.values().iter().enumerate() {
            worst[site] = worst[site].max(value.frobenius_norm());
        }
    }
    Ok(worst)
}

/// Build the residual map for `check_id` on an `n`-per-axis grid over the
/// scenario's sampling box.
pub fn run_residual_map(
    scenario: &LoadedScenario,
    check_id: &str,
    grid_points: Option<usize>,
) -> Result<ResidualMap> {
    if !MAP_IDS.contains(&check_id) {
        return Err(CliError::input(format!(
            "unknown check id '{check_id}'; valid ids: {}",
            MAP_IDS.join(", ")
        )));
    }
    let n =
        match grid_points.or_else(|| scenario.grids.first().copied()) {
            Some(n) => n,
            None => return Err(CliError::input(
                "no grid available: the scenario lists no lattice grids and no grid size was given",
            )),
        };
    let grid = LatticeGrid::new(scenario.extent, [n; 4])
        .map_err(|e| CliError::input(format!("grid size {n}: {e}")))?;

    let families = pair_families(scenario, check_id)?;
    let columns: Vec<&'static str> = if families.len() == 2 {
        vec!["residual", "residual_printed"]
    } else {
        vec!["residual"]
    };
    let mut values = Vec::with_capacity(families.len());
    for family in &families {
        values.push(family_map(family, &grid)?);
    }
    Ok(ResidualMap {
        grid,
        columns,
        values,
    })
}

impl ResidualMap {
    /// Write the map in the lattice CSV layout: `idx0..idx3`, `x0..x3`, one
    /// residual column per family, sites in row-major order.
    pub fn write_csv(&self, writer: impl std::io::Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec![
            "idx0".to_string(),
            "idx1".to_string(),
            "idx2".to_string(),
            "idx3".to_string(),
            "x0".to_string(),
            "x1".to_string(),
            "x2".to_string(),
            "x3".to_string(),
        ];
        header.extend(self.columns.iter().map(|c| c.to_string()));
        w.write_record(&header).map_err(csv_error)?;
        for site in 0..self.grid.site_count() {
            let index = self.grid.unflatten(site);
            let point = self.grid.point(&index);
            let mut row: Vec<String> = index.iter().map(|i| i.to_string()).collect();
            row.extend(point.coords.iter().map(|x| format!("{x}")));
            for column in &self.values {
                row.push(format!("{}", column[site]));
            }
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}
