//! Relative residuals: the common currency of every verification check.
//!
//! A residual is a raw Frobenius norm together with the scale
//! `1 + max ||input||_F` over the quantities entering the comparison, so
//! bounds stay meaningful whether the fields have amplitude 1e-3 or 1e3.

use crate::error::Result;
use crate::field::{OperatorFieldExpr, PointEvaluator, SpacetimePoint};
use crate::matrix::OperatorMatrix;
use crate::scalar::Real;

/// A raw residual plus the scale it should be compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual<T: Real> {
    pub value: T,
    pub scale: T,
}

impl<T: Real> Residual<T> {
    pub fn new(value: T, scale: T) -> Self {
        Self { value, scale }
    }

    /// `||lhs - rhs||` scaled by `1 + max(||lhs||, ||rhs||)`.
    pub fn between(lhs: &OperatorMatrix<T>, rhs: &OperatorMatrix<T>) -> Self {
        let value = lhs.sub(rhs).frobenius_norm();
        let scale = T::one() + lhs.frobenius_norm().max(rhs.frobenius_norm());
        Self { value, scale }
    }

    /// `||m||` scaled against the given reference inputs.
    pub fn of_norm(m: &OperatorMatrix<T>, inputs: &[&OperatorMatrix<T>]) -> Self {
        Self {
            value: m.frobenius_norm(),
            scale: crate::matrix::residual_scale(inputs),
        }
    }

    pub fn relative(&self) -> T {
        self.value / self.scale
    }

    pub fn within(&self, tol: T) -> bool {
        self.value <= tol * self.scale
    }

    /// The residual whose relative value is larger.
    pub fn max(self, other: Self) -> Self {
        if self.relative() >= other.relative() {
            self
        } else {
            other
        }
    }

    pub fn zero() -> Self {
        Self {
            value: T::zero(),
            scale: T::one(),
        }
    }
}

/// Two expressions claimed equal as fields; the basic shape of a covariance
/// or identity check.
#[derive(Debug, Clone)]
pub struct ExprPair<T: Real> {
    pub lhs: OperatorFieldExpr<T>,
    pub rhs: OperatorFieldExpr<T>,
}

impl<T: Real> ExprPair<T> {
    pub fn new(lhs: OperatorFieldExpr<T>, rhs: OperatorFieldExpr<T>) -> Self {
        Self { lhs, rhs }
    }

    /// Evaluates both sides at `x` (sharing one memo table) and returns the
    /// scaled difference.
    pub fn residual_at(&self, x: &SpacetimePoint<T>) -> Result<Residual<T>> {
        let mut ev = PointEvaluator::new(*x);
        let l = ev.eval(&self.lhs)?;
        let r = ev.eval(&self.rhs)?;
        Ok(Residual::between(&l, &r))
    }

    /// Maximum residual over a set of points.
    pub fn max_residual(&self, points: &[SpacetimePoint<T>]) -> Result<Residual<T>> {
        let mut worst = Residual::zero();
        for x in points {
            worst = worst.max(self.residual_at(x)?);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AnalyticOperatorField;
    use crate::matrix::random_hermitian;
    use crate::scalar::re;

    #[test]
    fn between_scales_by_larger_operand() {
        let a = random_hermitian::<f64>(3, 1, 1.0);
        let b = a.scale(re(2.0));
        let r = Residual::between(&a, &b);
        assert_eq!(r.value, a.frobenius_norm());
        assert_eq!(r.scale, 1.0 + b.frobenius_norm());
        assert!(!r.within(1e-10));
        assert!(Residual::between(&a, &a).within(0.0));
    }

    #[test]
    fn expr_pair_max_residual_picks_worst_point() {
        let m = random_hermitian::<f64>(2, 2, 1.0);
        let lhs = OperatorFieldExpr::leaf(AnalyticOperatorField::term(
            m.clone(),
            crate::field::AnalyticScalar::coordinate(1).unwrap(),
        ));
        let rhs = OperatorFieldExpr::zero(2);
        let pts = [
            SpacetimePoint::new([0.0, 0.5, 0.0, 0.0]),
            SpacetimePoint::new([0.0, 2.0, 0.0, 0.0]),
        ];
        let pair = ExprPair::new(lhs, rhs);
        let worst = pair.max_residual(&pts).unwrap();
        assert!((worst.value - 2.0 * m.frobenius_norm()).abs() <= 1e-14);
    }
}
