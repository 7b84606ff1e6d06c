//! Operator-valued gauge transformations for quantum electrodynamics.
//!
//! The gauge function is promoted from a scalar to a Hermitian operator
//! `L(x)` on an n-dimensional internal space. The crate builds the
//! transformation `S = exp(-i kappa L)`, applies it to potentials,
//! observables, states, and Hamiltonians, forms field strengths along two
//! independent routes, and measures the residuals of the covariance and
//! conservation laws that the construction is supposed to satisfy - both at
//! analytic sample points and on periodic lattices with a measured
//! convergence order.
//!
//! Everything numeric is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); `f64` aliases are exported at the root.

// Index loops over spacetime axes and matrix entries mirror the tensor
// notation the formulas are written in.
#![allow(clippy::needless_range_loop)]

pub mod constants;
pub mod corpus;
pub mod error;
pub mod field;
pub mod gauge;
pub mod lattice;
pub mod matrix;
pub mod maxwell;
pub mod polarization;
pub mod residual;
pub mod sampling;
pub mod scalar;
pub mod strength;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use field::{
    AnalyticOperatorField, AnalyticScalar, OperatorFieldExpr, PointEvaluator, SpacetimePoint,
    Symmetry, WaveKind,
};
pub use gauge::{
    abelian_reduction, covariant_derivative_first, covariant_derivative_second, energy_covariance,
    energy_operator, first_derivative_covariance, second_derivative_covariance, GaugeGenerator,
    GaugePotential, GaugeTransformation,
};
pub use lattice::{
    convergence_order, validate_periodic, ConvergenceOutcome, ConvergenceSample, ConvergenceStudy,
    LatticeField, LatticeGrid,
};
pub use matrix::{
    commutator, conjugate, exp_frechet, expectation, inner_product, random_hermitian,
    residual_scale, state_norm, OperatorMatrix, CONJUGATION_CONDITION_BOUND,
};
pub use maxwell::{
    classical_reduction_pairs, commutative_gauge_probe, covariant_divergence,
    current_bracket_identity, current_covariance_pairs, decomposition_pairs, divergence,
    homogeneous_pairs, potential_current_bracket, real_conservation_pair, total_conservation_pair,
    virtual_conservation_pair, CommutativityProbe, CurrentBracketIdentity, CurrentDensity,
    CurrentFlavor,
};
pub use polarization::{
    displacement_field, field_bracket_parts, h_field, hidden_polarization_check, levi_civita3,
    polarization_gauge_dependence, strength_consistency_pairs, vacuum_magnetization,
    vacuum_magnetization_with, vacuum_polarization, HiddenResponseReport,
    MagnetizationNormalization, MediumResponse,
};
pub use residual::{ExprPair, Residual};
pub use sampling::{
    radical_inverse, sample_box, unit_box_samples, DEFAULT_SAMPLE_COUNT, HALTON_BASES,
};
pub use scalar::{Real, C};
pub use strength::{
    bracket_part, classical_part, commutator_route_pair, covariance_pairs, equivalence_pairs,
    levi_civita, metric_sign, pure_gauge_flatness_pairs, FieldStrength, FieldVector3,
    StrengthRoute,
};

/// `f64` operator matrix.
pub type OperatorMatrix64 = OperatorMatrix<f64>;
/// `f64` physical constants.
pub type PhysicalConstants64 = PhysicalConstants<f64>;
