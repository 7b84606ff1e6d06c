//! Run reports: the JSON document a run emits, with a fixed field order so
//! reports are byte-comparable, and the timestamp isolated to a single
//! trailing field.

use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// How a check's recorded magnitude is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Pass iff `max_residual <= tolerance * scale`.
    Bound,
    /// Pass iff `max_residual > tolerance * scale`: the quantity must be
    /// visibly non-zero (a non-degeneracy witness).
    Witness,
    /// Recorded for inspection; never enforced.
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

/// One executed check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    /// Stable identifier, unique within a report.
    pub id: String,
    /// Equation tag linking the check back to the source derivation.
    pub equation: String,
    pub mode: CheckMode,
    /// Largest observed magnitude (absolute, Frobenius where applicable).
    pub max_residual: f64,
    /// The scale the tolerance multiplies.
    pub scale: f64,
    pub tolerance: f64,
    /// Measured convergence slope, present only for convergence checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    pub status: CheckStatus,
}

impl CheckRecord {
    /// Decide pass/fail from the mode and the recorded numbers.
    pub fn judge(mode: CheckMode, max_residual: f64, scale: f64, tolerance: f64) -> CheckStatus {
        match mode {
            CheckMode::Info => CheckStatus::Info,
            CheckMode::Bound => {
                if max_residual <= tolerance * scale {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                }
            }
            CheckMode::Witness => {
                if max_residual > tolerance * scale {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                }
            }
        }
    }
}

/// The conventions the numbers in the report depend on, echoed so a reader
/// can interpret signs and normalizations without consulting the source.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub metric: &'static str,
    pub coupling: &'static str,
    pub transformation: &'static str,
    pub potential_rule: &'static str,
    pub hamiltonian_rule: &'static str,
    pub field_strength: &'static str,
    pub dual_orientation: &'static str,
    pub electric_field: &'static str,
    pub magnetic_field: &'static str,
    pub magnetization_normalization: &'static str,
    pub norm: &'static str,
    pub residual_scale: &'static str,
}

impl Conventions {
    pub fn current() -> Self {
        Self {
            metric: "diag(+1, -1, -1, -1)",
            coupling: "kappa = q / (hbar c)",
            transformation: "S = exp(-i kappa Lambda)",
            potential_rule: "A'_mu = S A_mu S^-1 + (i hbar c / q) (d_mu S) S^-1",
            hamiltonian_rule: "H' = S H S^-1 + i hbar c (d_0 S) S^-1",
            field_strength: "F_mu_nu = d_mu A_nu - d_nu A_mu + i kappa [A_mu, A_nu]",
            dual_orientation: "epsilon^0123 = +1",
            electric_field: "E_i = F_0i",
            magnetic_field: "B_k = -(1/2) epsilon_kij F_ij",
            magnetization_normalization:
                "strength-matched: M_k = (i kappa / (2 mu0)) epsilon_kij [A^i, A^j] \
                 (half of the double-sum reading; the ratio between the two readings is 2)",
            norm: "Frobenius",
            residual_scale: "1 + max operand norm",
        }
    }
}

/// Reproducibility stamp.
#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub package_version: &'static str,
    pub dim: usize,
    pub seed: u64,
}

/// The complete run report. `generated_at_unix` is the only
/// run-time-dependent field and is serialized last, on its own line, so two
/// reports can be compared byte-for-byte after dropping that line.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scenario: String,
    pub command: String,
    pub conventions: Conventions,
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
    pub overall: CheckStatus,
    pub generated_at_unix: u64,
}

impl RunReport {
    pub fn new(
        scenario: String,
        command: &str,
        dim: usize,
        seed: u64,
        mut checks: Vec<CheckRecord>,
    ) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let overall = if checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        };
        let generated_at_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            scenario,
            command: command.to_string(),
            conventions: Conventions::current(),
            environment: Environment {
                package_version: env!("CARGO_PKG_VERSION"),
                dim,
                seed,
            },
            checks,
            overall,
            generated_at_unix,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.overall == CheckStatus::Pass
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
