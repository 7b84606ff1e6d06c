//! Error taxonomy shared by the whole crate.
//!
//! Variants are deliberately scalar-independent: norms and defects are
//! reported as `f64` so the error type stays non-generic.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator entries are not finite")]
    NonFinite,

    #[error("matrix exponential overflow (input 1-norm {norm:.3e})")]
    ExpOverflow { norm: f64 },

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("conjugation refused: condition estimate {cond:.3e} exceeds bound {bound:.3e}")]
    IllConditioned { cond: f64, bound: f64 },

    #[error("field is not {expected} within tolerance (defect {defect:.3e})")]
    SymmetryDefect { expected: &'static str, defect: f64 },

    #[error("invalid physical constants: {reason}")]
    InvalidConstants { reason: String },

    #[error("coupling q = 0: the potential transformation divides by the coupling")]
    ZeroCoupling,

    #[error("mismatched physical constants between operands")]
    ConstantsMismatch,

    #[error("state length {len} does not match operator dimension {dim}")]
    StateLength { len: usize, dim: usize },

    #[error("state norm {norm:.3e} is not 1 within 1e-12")]
    StateNotNormalized { norm: f64 },

    #[error("spatial index {index} out of range 1..=3")]
    SpatialIndex { index: usize },

    #[error("direction index {index} out of range 0..=3")]
    Direction { index: usize },

    #[error("lattice axis {axis} has {points} points; at least 4 are required")]
    GridTooSmall { axis: usize, points: usize },

    #[error("lattice extent must be positive on every axis")]
    BadExtent,

    #[error("convergence study needs at least {need} grids, got {got}")]
    TooFewGrids { need: usize, got: usize },

    #[error("field is not compatible with periodic differencing: {reason}")]
    NonPeriodic { reason: String },

    #[error("evaluation failed at lattice site {index:?}: {source}")]
    AtSite {
        index: [usize; 4],
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
