//! Analytic operator-valued fields on spacetime.
//!
//! [`basis`] provides scalar building blocks whose partial derivatives of
//! every order are available in closed form, and the matrix-valued fields
//! assembled from them. [`expr`] combines those leaves into expression trees
//! (sums, products, commutators, exponentials) that stay closed under
//! differentiation, so gauge-transformed quantities keep exact derivatives
//! with no step-size error anywhere.

pub mod basis;
pub mod expr;

pub use basis::{AnalyticOperatorField, AnalyticScalar, SpacetimePoint, Symmetry, WaveKind};
pub use expr::{central_difference, finite_diff_check, OperatorFieldExpr, PointEvaluator};
