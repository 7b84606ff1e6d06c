//! Scenario files: the JSON schema, its validation, and the translation
//! into live engine objects.
//!
//! Schema summary (version 1):
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "pauli-constant",
//!   "constants": {"q": 1.0, "hbar": 1.0, "c": 1.0, "eps0": 1.0, "mu0": 1.0},
//!   "dim": 2,
//!   "potential": {"components": [<field>, <field>, <field>, <field>]},
//!   "generator": <field>,
//!   "prescribed_current": {"components": [<field>, ...]},
//!   "sampling": {"extent": [1,1,1,1], "points": 32, "seed": 7},
//!   "lattice": {"grids": [8, 16, 32]},
//!   "tolerances": {"strength-equivalence": 1e-12}
//! }
//! ```
//!
//! A `<field>` is `{"terms": [{"coefficient": ..., "basis": ...}]}` where a
//! coefficient is one of `{"matrix": [[re, im], ...]}` (row-major pairs),
//! `{"pauli": "x" | "y" | "z"}`, `{"identity": {"scale": s}}`, or
//! `{"random_hermitian": {"seed": n, "scale": s}}`, and a basis is
//! `{"monomial": {"coeff": c, "powers": [p0, p1, p2, p3]}}` or
//! `{"wave": {"kind": "cos" | "sin", "amplitude": a, "wavevector": [..],
//! "phase": f}}`.

use std::collections::BTreeMap;
use std::path::Path;

use ogt_core::corpus::{pauli_x, pauli_y, pauli_z};
use ogt_core::matrix::random_hermitian;
use ogt_core::sampling::sample_box;
use ogt_core::scalar::re;
use ogt_core::{
    AnalyticOperatorField, AnalyticScalar, CurrentDensity, GaugeGenerator, GaugePotential,
    GaugeTransformation, OperatorFieldExpr, OperatorMatrix, PhysicalConstants, SpacetimePoint,
    WaveKind,
};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Names of the scenarios shipped inside the binary, resolvable without a
/// file path.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "abelian-planewave",
        include_str!("../scenarios/abelian-planewave.json"),
    ),
    (
        "abelian-coulomb-like",
        include_str!("../scenarios/abelian-coulomb-like.json"),
    ),
    (
        "pauli-constant",
        include_str!("../scenarios/pauli-constant.json"),
    ),
    (
        "pauli-polynomial",
        include_str!("../scenarios/pauli-polynomial.json"),
    ),
    ("pauli-trig", include_str!("../scenarios/pauli-trig.json")),
    (
        "identity-current",
        include_str!("../scenarios/identity-current.json"),
    ),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub constants: ConstantsDesc,
    pub dim: usize,
    pub potential: ComponentsDesc,
    #[serde(default)]
    pub generator: Option<FieldDesc>,
    #[serde(default)]
    pub prescribed_current: Option<ComponentsDesc>,
    pub sampling: SamplingDesc,
    #[serde(default)]
    pub lattice: Option<LatticeDesc>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsDesc {
    #[serde(default = "one")]
    pub q: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "one")]
    pub eps0: f64,
    #[serde(default = "one")]
    pub mu0: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ConstantsDesc {
    fn default() -> Self {
        Self {
            q: 1.0,
            hbar: 1.0,
            c: 1.0,
            eps0: 1.0,
            mu0: 1.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentsDesc {
    pub components: [FieldDesc; 4],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDesc {
    pub terms: Vec<TermDesc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDesc {
    pub coefficient: CoefficientDesc,
    pub basis: BasisDesc,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientDesc {
    /// Row-major `[re, im]` pairs; must hold `dim * dim` entries.
    Matrix(Vec<[f64; 2]>),
    Pauli(PauliKind),
    Identity {
        scale: f64,
    },
    RandomHermitian {
        seed: u64,
        scale: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PauliKind {
    X,
    Y,
    Z,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisDesc {
    Monomial {
        #[serde(default = "one")]
        coeff: f64,
        powers: [u32; 4],
    },
    Wave {
        kind: WaveKindDesc,
        #[serde(default = "one")]
        amplitude: f64,
        wavevector: [f64; 4],
        #[serde(default)]
        phase: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKindDesc {
    Cos,
    Sin,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingDesc {
    pub extent: [f64; 4],
    pub points: usize,
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDesc {
    pub grids: Vec<usize>,
}

/// Command-line overrides applied after the file is parsed.
#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dim: Option<usize>,
}

/// A scenario translated into live engine objects.
pub struct LoadedScenario {
    pub name: String,
    pub constants: PhysicalConstants<f64>,
    pub dim: usize,
    pub potential: GaugePotential<f64>,
    pub transformation: Option<GaugeTransformation<f64>>,
    pub prescribed: Option<CurrentDensity<f64>>,
    pub extent: [f64; 4],
    pub point_count: usize,
    pub seed: u64,
    pub grids: Vec<usize>,
    pub tolerances: BTreeMap<String, f64>,
}

impl LoadedScenario {
    /// The seeded low-discrepancy sample of the scenario's box.
    pub fn sample_points(&self) -> Vec<SpacetimePoint<f64>> {
        sample_box(&self.extent, self.point_count, self.seed)
    }
}

/// Resolve `spec` as a file path or, failing that, as a bundled scenario
/// name, and return the raw JSON text.
pub fn resolve(spec: &str) -> Result<String> {
    let path = Path::new(spec);
    if path.exists() {
        return Ok(std::fs::read_to_string(path)?);
    }
    if let Some((_, text)) = BUNDLED.iter().find(|(name, _)| *name == spec) {
        return Ok(text.to_string());
    }
    let names: Vec<&str> = BUNDLED.iter().map(|(name, _)| *name).collect();
    Err(CliError::input(format!(
        "scenario '{spec}' is neither a readable file nor a bundled name; bundled scenarios: {}",
        names.join(", ")
    )))
}

/// Parse, validate, and build a scenario from JSON text.
pub fn load_str(text: &str, overrides: Overrides) -> Result<LoadedScenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
        CliError::input(format!(
            "scenario schema violation at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    build(file, overrides)
}

/// Resolve and load in one step.
pub fn load(spec: &str, overrides: Overrides) -> Result<LoadedScenario> {
    load_str(&resolve(spec)?, overrides)
}

fn build(file: ScenarioFile, overrides: Overrides) -> Result<LoadedScenario> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::input(format!(
            "unsupported schema_version {} (this build reads version {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    if file.name.is_empty() {
        return Err(CliError::input("scenario field 'name' must be non-empty"));
    }
    let dim = overrides.dim.unwrap_or(file.dim);
    if dim == 0 {
        return Err(CliError::input("scenario field 'dim' must be at least 1"));
    }
    let seed = overrides.seed.unwrap_or(file.sampling.seed);
    if file.sampling.points == 0 {
        return Err(CliError::input(
            "scenario field 'sampling.points' must be at least 1",
        ));
    }
    if file
        .sampling
        .extent
        .iter()
        .any(|l| !l.is_finite() || *l <= 0.0)
    {
        return Err(CliError::input(
            "scenario field 'sampling.extent' entries must be finite and positive",
        ));
    }

    let kd = &file.constants;
    let constants = PhysicalConstants::new(kd.q, kd.hbar, kd.c, kd.eps0, kd.mu0)
        .map_err(|e| CliError::input(format!("scenario field 'constants': {e}")))?;

    let potential_components = build_components(&file.potential, dim, "potential")?;
    let potential = GaugePotential::new(potential_components)
        .map_err(|e| CliError::input(format!("scenario field 'potential': {e}")))?;

    let transformation = match &file.generator {
        None => None,
        Some(desc) => {
            let expr = build_field(desc, dim, "generator")?;
            let generator = GaugeGenerator::new(expr)
                .map_err(|e| CliError::input(format!("scenario field 'generator': {e}")))?;
            Some(
                GaugeTransformation::new(generator, constants)
                    .map_err(|e| CliError::input(format!("scenario field 'generator': {e}")))?,
            )
        }
    };

    let prescribed = match &file.prescribed_current {
        None => None,
        Some(desc) => Some(
            CurrentDensity::prescribed(build_components(desc, dim, "prescribed_current")?)
                .map_err(|e| {
                    CliError::input(format!("scenario field 'prescribed_current': {e}"))
                })?,
        ),
    };

    let grids = file.lattice.map(|l| l.grids).unwrap_or_default();

    Ok(LoadedScenario {
        name: file.name,
        constants,
        dim,
        potential,
        transformation,
        prescribed,
        extent: file.sampling.extent,
        point_count: file.sampling.points,
        seed,
        grids,
        tolerances: file.tolerances,
    })
}

fn build_components(
    desc: &ComponentsDesc,
    dim: usize,
    what: &str,
) -> Result<[OperatorFieldExpr<f64>; 4]> {
    let mut out = Vec::with_capacity(4);
    for (mu, field) in desc.components.iter().enumerate() {
        out.push(build_field(field, dim, &format!("{what}[{mu}]"))?);
    }
    Ok(out.try_into().expect("four components"))
}

fn build_field(desc: &FieldDesc, dim: usize, what: &str) -> Result<OperatorFieldExpr<f64>> {
    let mut field = AnalyticOperatorField::zero(dim);
    for (i, term) in desc.terms.iter().enumerate() {
        let coeff = build_coefficient(&term.coefficient, dim, &format!("{what}.terms[{i}]"))?;
        field
            .push_term(coeff, build_basis(&term.basis))
            .map_err(|e| CliError::input(format!("scenario field '{what}.terms[{i}]': {e}")))?;
    }
    Ok(OperatorFieldExpr::leaf(field))
}

fn build_coefficient(
    desc: &CoefficientDesc,
    dim: usize,
    what: &str,
) -> Result<OperatorMatrix<f64>> {
    match desc {
        CoefficientDesc::Matrix(pairs) => {
            if pairs.len() != dim * dim {
                return Err(CliError::input(format!(
                    "scenario field '{what}': matrix holds {} entries, dim {dim} needs {}",
                    pairs.len(),
                    dim * dim
                )));
            }
            let data = pairs
                .iter()
                .map(|[re_part, im_part]| ogt_core::C::new(*re_part, *im_part))
                .collect();
            OperatorMatrix::from_row_major(dim, data)
                .map_err(|e| CliError::input(format!("scenario field '{what}': {e}")))
        }
        CoefficientDesc::Pauli(kind) => {
            if dim != 2 {
                return Err(CliError::input(format!(
                    "scenario field '{what}': pauli coefficients require dim = 2, got {dim}"
                )));
            }
            Ok(match kind {
                PauliKind::X => pauli_x(),
                PauliKind::Y => pauli_y(),
                PauliKind::Z => pauli_z(),
            })
        }
        CoefficientDesc::Identity { scale } => Ok(OperatorMatrix::identity(dim).scale(re(*scale))),
        CoefficientDesc::RandomHermitian { seed, scale } => {
            Ok(random_hermitian(dim, *seed, *scale))
        }
    }
}

fn build_basis(desc: &BasisDesc) -> AnalyticScalar<f64> {
    match desc {
        BasisDesc::Monomial { coeff, powers } => AnalyticScalar::Monomial {
            coeff: *coeff,
            powers: *powers,
        },
        BasisDesc::Wave {
            kind,
            amplitude,
            wavevector,
            phase,
        } => AnalyticScalar::Wave {
            amplitude: *amplitude,
            wavevector: *wavevector,
            phase: *phase,
            kind: match kind {
                WaveKindDesc::Cos => WaveKind::Cos,
                WaveKindDesc::Sin => WaveKind::Sin,
            },
        },
    }
}
