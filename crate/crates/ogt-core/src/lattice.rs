//! Periodic 4D lattice backend: sample expression fields on a grid, take
//! central differences, and measure convergence order against the exact
//! derivative engine.
//!
//! This is the cross-validation arm of the workspace: every identity the
//! exact engine verifies symbolically-sharp can be re-measured here with a
//! second-order stencil, and the measured order (2.0 for trig-basis
//! fields) certifies that the two derivative routes describe the same
//! field. Boundaries are periodic, so only trig-compatible bases are
//! accepted for differencing studies; sampling itself accepts anything.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{AnalyticScalar, OperatorFieldExpr, SpacetimePoint};
use crate::matrix::OperatorMatrix;
use crate::scalar::{re, Real, C};

/// A periodic box `[0, L_0) x ... x [0, L_3)` with `n_mu` sites per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGrid<T: Real> {
    extent: [T; 4],
    points: [usize; 4],
}

impl<T: Real> LatticeGrid<T> {
    /// Central differences need two distinct neighbors per site.
    pub const MIN_POINTS: usize = 4;

    pub fn new(extent: [T; 4], points: [usize; 4]) -> Result<Self> {
        for (axis, n) in points.iter().enumerate() {
            if *n < Self::MIN_POINTS {
                return Err(Error::GridTooSmall { axis, points: *n });
            }
        }
        if extent.iter().any(|l| !l.is_finite() || *l <= T::zero()) {
            return Err(Error::BadExtent);
        }
        Ok(Self { extent, points })
    }

    /// A cubic grid: the same extent and site count on every axis.
    pub fn cubic(extent: T, points: usize) -> Result<Self> {
        Self::new([extent; 4], [points; 4])
    }

    pub fn extent(&self) -> &[T; 4] {
        &self.extent
    }

    pub fn points(&self) -> &[usize; 4] {
        &self.points
    }

    /// `h_mu = L_mu / n_mu`.
    pub fn spacing(&self, mu: usize) -> T {
        self.extent[mu] / T::from_usize(self.points[mu]).expect("site count fits in T")
    }

    pub fn site_count(&self) -> usize {
        self.points.iter().product()
    }

    /// Coordinates of the site at `index`: `x_mu = index_mu * h_mu`.
    pub fn point(&self, index: &[usize; 4]) -> SpacetimePoint<T> {
        SpacetimePoint::new(std::array::from_fn(|mu| {
            self.spacing(mu) * T::from_usize(index[mu]).expect("site index fits in T")
        }))
    }

    /// Row-major flattening of a 4-index.
    pub fn flat_index(&self, index: &[usize; 4]) -> usize {
        let [n0, n1, n2, n3] = self.points;
        debug_assert!(index[0] < n0 && index[1] < n1 && index[2] < n2 && index[3] < n3);
        ((index[0] * n1 + index[1]) * n2 + index[2]) * n3 + index[3]
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn unflatten(&self, mut flat: usize) -> [usize; 4] {
        let [_, n1, n2, n3] = self.points;
        let i3 = flat % n3;
        flat /= n3;
        let i2 = flat % n2;
        flat /= n2;
        let i1 = flat % n1;
        flat /= n1;
        [flat, i1, i2, i3]
    }
}

/// An operator matrix per lattice site.
#[derive(Debug, Clone)]
pub struct LatticeField<T: Real> {
    grid: LatticeGrid<T>,
    dim: usize,
    values: Vec<OperatorMatrix<T>>,
}

impl<T: Real> LatticeField<T> {
    /// Evaluates `expr` at every site. Sites are independent, so the work
    /// runs in parallel; values (and any error) are collected in site
    /// order, making the result identical at every thread count.
    pub fn sample(expr: &OperatorFieldExpr<T>, grid: &LatticeGrid<T>) -> Result<Self> {
        let evaluated: Vec<Result<OperatorMatrix<T>>> = (0..grid.site_count())
            .into_par_iter()
            .map(|flat| {
                let index = grid.unflatten(flat);
                expr.eval(&grid.point(&index)).map_err(|e| Error::AtSite {
                    index,
                    source: Box::new(e),
                })
            })
            .collect();
        let mut values = Vec::with_capacity(evaluated.len());
        for v in evaluated {
            values.push(v?);
        }
        Ok(Self {
            grid: grid.clone(),
            dim: expr.dim(),
            values,
        })
    }

    pub fn grid(&self) -> &LatticeGrid<T> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, index: &[usize; 4]) -> &OperatorMatrix<T> {
        &self.values[self.grid.flat_index(index)]
    }

    pub fn values(&self) -> &[OperatorMatrix<T>] {
        &self.values
    }

    /// Second-order central difference along `mu` with periodic
    /// wraparound: `(f[i+1] - f[i-1]) / (2 h_mu)`.
    pub fn central_diff(&self, mu: usize) -> Result<Self> {
        if mu >= 4 {
            return Err(Error::Direction { index: mu });
        }
        let n = self.grid.points[mu];
        let half_inv = (T::one() + T::one()).recip() / self.grid.spacing(mu);
        let values: Vec<OperatorMatrix<T>> = (0..self.values.len())
            .into_par_iter()
            .map(|flat| {
                let index = self.grid.unflatten(flat);
                let mut up = index;
                up[mu] = (index[mu] + 1) % n;
                let mut down = index;
                down[mu] = (index[mu] + n - 1) % n;
                self.value(&up).sub(self.value(&down)).scale(re(half_inv))
            })
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            dim: self.dim,
            values,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| Ok(a.add(b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| Ok(a.sub(b)))
    }

    /// Pointwise commutator `[self, other]` at every site. Together with
    /// [`LatticeField::scale`] this assembles second-kind (bracket-corrected)
    /// lattice operators from already-sampled fields.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, crate::matrix::commutator)
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self {
            grid: self.grid.clone(),
            dim: self.dim,
            values: self.values.iter().map(|v| v.scale(k)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&OperatorMatrix<T>, &OperatorMatrix<T>) -> Result<OperatorMatrix<T>>,
    ) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Invalid(
                "lattice fields live on different grids".into(),
            ));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(Self {
            grid: self.grid.clone(),
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect::<Result<_>>()?,
        })
    }

    /// Largest Frobenius norm over all sites.
    pub fn max_norm(&self) -> T {
        self.values
            .iter()
            .map(|v| v.frobenius_norm())
            .fold(T::zero(), T::max)
    }

    /// Largest Frobenius norm of `self - other` over sites that are
    /// interior along `mu` (the wrap seam `i = 0, n-1` excluded), the
    /// error metric of the convergence studies.
    pub fn max_interior_difference(&self, other: &Self, mu: usize) -> Result<T> {
        if mu >= 4 {
            return Err(Error::Direction { index: mu });
        }
        let diff = self.sub(other)?;
        let n = self.grid.points[mu];
        let mut max = T::zero();
        for flat in 0..diff.values.len() {
            let index = self.grid.unflatten(flat);
            if index[mu] == 0 || index[mu] == n - 1 {
                continue;
            }
            max = max.max(diff.values[flat].frobenius_norm());
        }
        Ok(max)
    }
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceSample<T: Real> {
    /// Spacing along the differenced axis.
    pub h: T,
    /// Max-over-interior-sites Frobenius error against the exact
    /// derivative.
    pub error: T,
}

/// What the refinement sequence showed.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvergenceOutcome<T: Real> {
    /// Least-squares slope of `log(error)` against `log(h)`.
    Slope(T),
    /// Every error was indistinguishable from zero; no slope to fit.
    Exact,
    /// Errors did not decrease monotonically under refinement.
    NonMonotone { reason: String },
}

/// Samples plus verdict from [`convergence_order`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy<T: Real> {
    /// Coarse to fine.
    pub samples: Vec<ConvergenceSample<T>>,
    pub outcome: ConvergenceOutcome<T>,
}

/// Rejects fields whose basis cannot be periodic on the box: non-constant
/// monomials always, waves unless every `k_mu L_mu` is a whole number of
/// periods (within 1e-9).
pub fn validate_periodic<T: Real>(expr: &OperatorFieldExpr<T>, extent: &[T; 4]) -> Result<()> {
    let two_pi = T::from_f64(std::f64::consts::TAU).expect("tau is representable");
    let tol = T::from_f64(1e-9).expect("tolerance is representable");
    let mut verdict = Ok(());
    expr.visit_leaves(&mut |leaf| {
        if verdict.is_err() {
            return;
        }
        for (_, scalar) in leaf.terms() {
            match scalar {
                AnalyticScalar::Monomial { powers, .. } => {
                    if powers.iter().any(|p| *p > 0) {
                        verdict = Err(Error::NonPeriodic {
                            reason: format!(
                                "monomial basis with exponents {powers:?} does not wrap \
                                 around the box; use trig bases for lattice differencing"
                            ),
                        });
                        return;
                    }
                }
                AnalyticScalar::Wave { wavevector, .. } => {
                    for mu in 0..4 {
                        let cycles = wavevector[mu] * extent[mu] / two_pi;
                        if (cycles - cycles.round()).abs() > tol {
                            verdict = Err(Error::NonPeriodic {
                                reason: format!(
                                    "wave component along axis {mu} completes {:.6} cycles \
                                     across the box; a whole number is required",
                                    cycles.to_f64().unwrap_or(f64::NAN)
                                ),
                            });
                            return;
                        }
                    }
                }
            }
        }
    });
    verdict
}

/// Measures the convergence order of the central difference along `mu`
/// against the exact derivative of `expr`, over at least three grids on a
/// shared box with strictly increasing resolution.
pub fn convergence_order<T: Real>(
    expr: &OperatorFieldExpr<T>,
    mu: usize,
    grids: &[LatticeGrid<T>],
) -> Result<ConvergenceStudy<T>> {
    if grids.len() < 3 {
        return Err(Error::TooFewGrids {
            need: 3,
            got: grids.len(),
        });
    }
    let extent = grids[0].extent();
    if grids.iter().any(|g| g.extent() != extent) {
        return Err(Error::Invalid(
            "convergence grids must share one box extent".into(),
        ));
    }
    for pair in grids.windows(2) {
        if pair[1].points()[mu] <= pair[0].points()[mu] {
            return Err(Error::Invalid(
                "convergence grids must strictly refine along the differenced axis".into(),
            ));
        }
    }
    validate_periodic(expr, extent)?;
    let exact = expr.derivative(mu)?;

    let mut samples = Vec::with_capacity(grids.len());
    let mut reference = T::zero();
    for grid in grids {
        let sampled = LatticeField::sample(expr, grid)?;
        let numeric = sampled.central_diff(mu)?;
        let exact_sampled = LatticeField::sample(&exact, grid)?;
        reference = reference.max(exact_sampled.max_norm());
        samples.push(ConvergenceSample {
            h: grid.spacing(mu),
            error: numeric.max_interior_difference(&exact_sampled, mu)?,
        });
    }

    let exact_floor = T::from_f64(1e-12).expect("tolerance fits") * (T::one() + reference);
    if samples.iter().all(|s| s.error <= exact_floor) {
        return Ok(ConvergenceStudy {
            samples,
            outcome: ConvergenceOutcome::Exact,
        });
    }
    for pair in samples.windows(2) {
        if pair[1].error >= pair[0].error {
            let reason = format!(
                "error did not decrease under refinement: {:.3e} at h = {:.3e} vs {:.3e} at h = {:.3e}",
                pair[1].error.to_f64().unwrap_or(f64::NAN),
                pair[1].h.to_f64().unwrap_or(f64::NAN),
                pair[0].error.to_f64().unwrap_or(f64::NAN),
                pair[0].h.to_f64().unwrap_or(f64::NAN),
            );
            return Ok(ConvergenceStudy {
                samples,
                outcome: ConvergenceOutcome::NonMonotone { reason },
            });
        }
    }

    // Least-squares slope of log(error) against log(h).
    let n = T::from_usize(samples.len()).expect("sample count fits");
    let logs: Vec<(T, T)> = samples.iter().map(|s| (s.h.ln(), s.error.ln())).collect();
    let mean_h = logs.iter().map(|(h, _)| *h).fold(T::zero(), |a, b| a + b) / n;
    let mean_e = logs.iter().map(|(_, e)| *e).fold(T::zero(), |a, b| a + b) / n;
    let mut num = T::zero();
    let mut den = T::zero();
    for (h, e) in &logs {
        num += (*h - mean_h) * (*e - mean_e);
        den += (*h - mean_h) * (*h - mean_h);
    }
    Ok(ConvergenceStudy {
        samples,
        outcome: ConvergenceOutcome::Slope(num / den),
    })
}
