//! Expression trees over operator-valued fields, closed under exact
//! differentiation.
//!
//! A node is a leaf ([`AnalyticOperatorField`]) or a combination: sum, scalar
//! multiple, product, commutator, or matrix exponential. The derivative of
//! every combination is again a tree, including the exponential: with
//! `B(a, e) = [[a, e], [0, a]]`,
//!
//! ```text
//! d_mu exp(a) = top-right block of exp(B(a, d_mu a))
//! ```
//!
//! and `B` itself differentiates blockwise, so second and higher derivatives
//! of exponentials come out by doubling the block size again - exact at every
//! order, never a finite-difference step.
//!
//! Derivatives are cached per node and direction behind `Arc`s, so repeated
//! differentiation returns shared subtrees, and a [`PointEvaluator`] memoizes
//! node values at a point across every expression that shares structure.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::basis::{check_direction, AnalyticOperatorField, SpacetimePoint, Symmetry};
use crate::matrix::OperatorMatrix;
use crate::scalar::{Real, C};

enum Kind<T: Real> {
    Leaf(AnalyticOperatorField<T>),
    Sum(OperatorFieldExpr<T>, OperatorFieldExpr<T>),
    Scale(C<T>, OperatorFieldExpr<T>),
    Product(OperatorFieldExpr<T>, OperatorFieldExpr<T>),
    Commutator(OperatorFieldExpr<T>, OperatorFieldExpr<T>),
    Exp(OperatorFieldExpr<T>),
    /// `[[a, e], [0, a]]`; doubles the operator dimension.
    Block2(OperatorFieldExpr<T>, OperatorFieldExpr<T>),
    /// Top-right quarter of an even-dimensional expression.
    TopRight(OperatorFieldExpr<T>),
    /// Same values as the inner expression, with a symmetry class attached
    /// after a numeric check (see [`OperatorFieldExpr::certified`]).
    Certified(OperatorFieldExpr<T>),
}

struct Node<T: Real> {
    kind: Kind<T>,
    dim: usize,
    sym: Symmetry,
    /// Whether values are unitary at every point (tracked structurally:
    /// exponentials of anti-Hermitian arguments and their products).
    unitary: bool,
    derivs: [OnceLock<OperatorFieldExpr<T>>; 4],
}

/// An operator-valued field expression; cheap to clone (shared tree).
#[derive(Clone)]
pub struct OperatorFieldExpr<T: Real> {
    node: Arc<Node<T>>,
}

impl<T: Real> std::fmt::Debug for OperatorFieldExpr<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.node.kind {
            Kind::Leaf(_) => "leaf",
            Kind::Sum(..) => "sum",
            Kind::Scale(..) => "scale",
            Kind::Product(..) => "product",
            Kind::Commutator(..) => "commutator",
            Kind::Exp(_) => "exp",
            Kind::Block2(..) => "block2",
            Kind::TopRight(_) => "top-right",
            Kind::Certified(_) => "certified",
        };
        f.debug_struct("OperatorFieldExpr")
            .field("kind", &kind)
            .field("dim", &self.node.dim)
            .field("sym", &self.node.sym.label())
            .finish()
    }
}

fn new_derivs<T: Real>() -> [OnceLock<OperatorFieldExpr<T>>; 4] {
    [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ]
}

impl<T: Real> OperatorFieldExpr<T> {
    fn from_parts(kind: Kind<T>, dim: usize, sym: Symmetry, unitary: bool) -> Self {
        Self {
            node: Arc::new(Node {
                kind,
                dim,
                sym,
                unitary,
                derivs: new_derivs(),
            }),
        }
    }

    pub fn leaf(field: AnalyticOperatorField<T>) -> Self {
        let dim = field.dim();
        let sym = field.symmetry();
        Self::from_parts(Kind::Leaf(field), dim, sym, false)
    }

    /// A spacetime-constant expression.
    pub fn constant(matrix: OperatorMatrix<T>) -> Self {
        Self::leaf(AnalyticOperatorField::constant(matrix))
    }

    pub fn zero(dim: usize) -> Self {
        Self::leaf(AnalyticOperatorField::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.node.dim
    }

    pub fn symmetry(&self) -> Symmetry {
        self.node.sym
    }

    /// True when the expression is unitary-valued by construction.
    pub fn is_unitary(&self) -> bool {
        self.node.unitary
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.node.dim != other.node.dim {
            Err(Error::DimensionMismatch {
                left: self.node.dim,
                right: other.node.dim,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let sym = if self.node.sym == other.node.sym {
            self.node.sym
        } else {
            Symmetry::Indefinite
        };
        Ok(Self::from_parts(
            Kind::Sum(self.clone(), other.clone()),
            self.node.dim,
            sym,
            false,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(crate::scalar::re(-T::one())))
    }

    pub fn scale(&self, k: C<T>) -> Self {
        let sym = if k.im == T::zero() {
            self.node.sym
        } else if k.re == T::zero() {
            self.node.sym.flipped()
        } else {
            Symmetry::Indefinite
        };
        Self::from_parts(Kind::Scale(k, self.clone()), self.node.dim, sym, false)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let unitary = self.node.unitary && other.node.unitary;
        Ok(Self::from_parts(
            Kind::Product(self.clone(), other.clone()),
            self.node.dim,
            Symmetry::Indefinite,
            unitary,
        ))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        use Symmetry::*;
        let sym = match (self.node.sym, other.node.sym) {
            (Hermitian, Hermitian) | (AntiHermitian, AntiHermitian) => AntiHermitian,
            (Hermitian, AntiHermitian) | (AntiHermitian, Hermitian) => Hermitian,
            _ => Indefinite,
        };
        Ok(Self::from_parts(
            Kind::Commutator(self.clone(), other.clone()),
            self.node.dim,
            sym,
            false,
        ))
    }

    /// Pointwise matrix exponential. Unitary-valued when the argument is
    /// anti-Hermitian.
    pub fn exp(&self) -> Self {
        let unitary = self.node.sym == Symmetry::AntiHermitian;
        Self::from_parts(
            Kind::Exp(self.clone()),
            self.node.dim,
            Symmetry::Indefinite,
            unitary,
        )
    }

    fn block2(a: &Self, e: &Self) -> Self {
        debug_assert_eq!(a.node.dim, e.node.dim);
        Self::from_parts(
            Kind::Block2(a.clone(), e.clone()),
            2 * a.node.dim,
            Symmetry::Indefinite,
            false,
        )
    }

    fn top_right(x: &Self) -> Self {
        debug_assert_eq!(x.node.dim % 2, 0);
        Self::from_parts(
            Kind::TopRight(x.clone()),
            x.node.dim / 2,
            Symmetry::Indefinite,
            false,
        )
    }

    fn certified_as(inner: &Self, sym: Symmetry) -> Self {
        Self::from_parts(
            Kind::Certified(inner.clone()),
            inner.node.dim,
            sym,
            inner.node.unitary,
        )
    }

    /// Attaches a symmetry class on the strength of a proof rather than a
    /// numeric probe. Reserved for call sites where the class is an exact
    /// consequence of construction (e.g. conjugation by a structurally
    /// unitary operator).
    pub(crate) fn claim_symmetry(&self, sym: Symmetry) -> Self {
        if self.node.sym == sym {
            self.clone()
        } else {
            Self::certified_as(self, sym)
        }
    }

    /// Attaches a symmetry class after verifying the claimed defect at the
    /// given probe points: `||G - G^dag||` (or `||G + G^dag||`) must stay
    /// within `tol * (1 + ||G||)` at each of them.
    pub fn certified(&self, sym: Symmetry, probes: &[SpacetimePoint<T>], tol: T) -> Result<Self> {
        for x in probes {
            let v = self.eval(x)?;
            let defect = match sym {
                Symmetry::Hermitian => v.hermiticity_defect(),
                Symmetry::AntiHermitian => v.antihermiticity_defect(),
                Symmetry::Indefinite => T::zero(),
            };
            let scale = T::one() + v.frobenius_norm();
            if defect > tol * scale {
                return Err(Error::SymmetryDefect {
                    expected: sym.label(),
                    defect: (defect / scale).to_f64().unwrap_or(f64::INFINITY),
                });
            }
        }
        Ok(Self::certified_as(self, sym))
    }

    /// Exact partial derivative along direction `mu` (`0..4`).
    ///
    /// The result shares subtrees with previous calls: differentiating twice
    /// returns the same node the second time.
    pub fn derivative(&self, mu: usize) -> Result<Self> {
        check_direction(mu)?;
        Ok(self.node.derivs[mu]
            .get_or_init(|| self.build_derivative(mu))
            .clone())
    }

    fn build_derivative(&self, mu: usize) -> Self {
        let d = match &self.node.kind {
            Kind::Leaf(f) => Self::leaf(f.derivative(mu)),
            Kind::Sum(a, b) => {
                let da = a.build_cached(mu);
                let db = b.build_cached(mu);
                da.add(&db).expect("summands share a dimension")
            }
            Kind::Scale(k, a) => a.build_cached(mu).scale(*k),
            Kind::Product(a, b) => {
                let left = a
                    .build_cached(mu)
                    .mul(b)
                    .expect("factors share a dimension");
                let right = a
                    .mul(&b.build_cached(mu))
                    .expect("factors share a dimension");
                left.add(&right).expect("products share a dimension")
            }
            Kind::Commutator(a, b) => {
                let left = a
                    .build_cached(mu)
                    .commutator(b)
                    .expect("arguments share a dimension");
                let right = a
                    .commutator(&b.build_cached(mu))
                    .expect("arguments share a dimension");
                left.add(&right).expect("commutators share a dimension")
            }
            Kind::Exp(a) => {
                let da = a.build_cached(mu);
                Self::top_right(&Self::block2(a, &da).exp())
            }
            Kind::Block2(a, e) => Self::block2(&a.build_cached(mu), &e.build_cached(mu)),
            Kind::TopRight(x) => Self::top_right(&x.build_cached(mu)),
            Kind::Certified(inner) => inner.build_cached(mu),
        };
        // Pointwise symmetry survives differentiation; keep the class when
        // the structural rules lose it.
        if self.node.sym != Symmetry::Indefinite && d.node.sym == Symmetry::Indefinite {
            Self::certified_as(&d, self.node.sym)
        } else {
            d
        }
    }

    fn build_cached(&self, mu: usize) -> Self {
        self.node.derivs[mu]
            .get_or_init(|| self.build_derivative(mu))
            .clone()
    }

    /// Evaluates at a single point with a fresh memo table. For several
    /// expressions at the same point, share a [`PointEvaluator`].
    pub fn eval(&self, x: &SpacetimePoint<T>) -> Result<OperatorMatrix<T>> {
        PointEvaluator::new(*x).eval(self)
    }

    /// Visits every analytic leaf reachable from this expression, left to
    /// right. Derivatives of a leaf stay within its basis family, so
    /// basis-level validation of an expression covers its derivatives too.
    pub fn visit_leaves(&self, visit: &mut impl FnMut(&AnalyticOperatorField<T>)) {
        match &self.node.kind {
            Kind::Leaf(f) => visit(f),
            Kind::Sum(a, b) | Kind::Product(a, b) | Kind::Commutator(a, b) | Kind::Block2(a, b) => {
                a.visit_leaves(visit);
                b.visit_leaves(visit);
            }
            Kind::Scale(_, a) | Kind::Exp(a) | Kind::TopRight(a) | Kind::Certified(a) => {
                a.visit_leaves(visit)
            }
        }
    }
}

/// Memoized evaluation of expression trees at one spacetime point.
///
/// Values are cached per node, so expressions that share subtrees (a field
/// and its derivatives, a transformation and its inverse) pay for each
/// distinct node once.
// The Arc clone in the slot keeps the node alive so the pointer key cannot
// be reused by a later allocation.
type CacheSlot<T> = (Arc<Node<T>>, OperatorMatrix<T>);

pub struct PointEvaluator<T: Real> {
    x: SpacetimePoint<T>,
    cache: HashMap<*const Node<T>, CacheSlot<T>>,
}

impl<T: Real> PointEvaluator<T> {
    pub fn new(x: SpacetimePoint<T>) -> Self {
        Self {
            x,
            cache: HashMap::new(),
        }
    }

    pub fn point(&self) -> &SpacetimePoint<T> {
        &self.x
    }

    pub fn eval(&mut self, expr: &OperatorFieldExpr<T>) -> Result<OperatorMatrix<T>> {
        let key = Arc::as_ptr(&expr.node);
        if let Some((_, v)) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let value = match &expr.node.kind {
            Kind::Leaf(f) => f.eval(&self.x),
            Kind::Sum(a, b) => self.eval(a)?.add(&self.eval(b)?),
            Kind::Scale(k, a) => self.eval(a)?.scale(*k),
            Kind::Product(a, b) => self.eval(a)?.mul(&self.eval(b)?),
            Kind::Commutator(a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                va.mul(&vb).sub(&vb.mul(&va))
            }
            Kind::Exp(a) => self.eval(a)?.matrix_exp()?,
            Kind::Block2(a, e) => OperatorMatrix::block2(&self.eval(a)?, &self.eval(e)?),
            Kind::TopRight(inner) => {
                let v = self.eval(inner)?;
                let n = expr.node.dim;
                v.block(0, n, n)
            }
            Kind::Certified(inner) => self.eval(inner)?,
        };
        self.cache.insert(key, (expr.node.clone(), value.clone()));
        Ok(value)
    }
}

/// `||central-difference(expr, x, mu, h) - eval(derive(expr, mu), x)||_F`
/// with the plain second-order stencil `(f(x+h) - f(x-h)) / 2h`.
///
/// An independent derivative oracle: for smooth expressions the value decays
/// as `O(h^2)`, so halving `h` divides it by about four.
pub fn finite_diff_check<T: Real>(
    expr: &OperatorFieldExpr<T>,
    x: &SpacetimePoint<T>,
    mu: usize,
    h: T,
) -> Result<T> {
    check_direction(mu)?;
    let plus = expr.eval(&x.shifted(mu, h))?;
    let minus = expr.eval(&x.shifted(mu, -h))?;
    let two = T::one() + T::one();
    let stencil = plus
        .sub(&minus)
        .scale(crate::scalar::re(T::one() / (two * h)));
    let exact = expr.derivative(mu)?.eval(x)?;
    Ok(stencil.sub(&exact).frobenius_norm())
}

/// Fourth-order central difference of `expr` along `mu`, for cross-checking
/// the exact derivative in tests.
pub fn central_difference<T: Real>(
    expr: &OperatorFieldExpr<T>,
    mu: usize,
    x: &SpacetimePoint<T>,
    h: T,
) -> Result<OperatorMatrix<T>> {
    check_direction(mu)?;
    let two = T::one() + T::one();
    let f = |s: T| -> Result<OperatorMatrix<T>> { expr.eval(&x.shifted(mu, s)) };
    let p1 = f(h)?;
    let m1 = f(-h)?;
    let p2 = f(two * h)?;
    let m2 = f(-(two * h))?;
    let eight = crate::scalar::real::<T>(8.0);
    let twelve_h = crate::scalar::real::<T>(12.0) * h;
    Ok(p1
        .sub(&m1)
        .scale(crate::scalar::re(eight))
        .sub(&p2.sub(&m2))
        .scale(crate::scalar::re(T::one() / twelve_h)))
}
