//! Operator Maxwell equations: induced, virtual, and total current
//! densities, the homogeneous (dual) identity, and the conservation laws
//! that tie them together.
//!
//! With `F` built from the potential, the inhomogeneous operator equation
//! *defines* the induced current
//!
//! ```text
//!     j^n = c ( d_m F^{mn} + i kappa [A_m, F^{mn}] )
//! ```
//!
//! and the bracket piece, taken alone with the opposite sign, is the
//! virtual current `-i kappa c [A_m, F^{mn}]`: a contribution sourced by
//! operator noncommutativity with no classical counterpart. Their sum, the
//! total current `c d_m F^{mn}`, is conserved under the plain divergence,
//! while the induced current is conserved under the bracket-extended one.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::field::{OperatorFieldExpr, SpacetimePoint};
use crate::gauge::{GaugePotential, GaugeTransformation};
use crate::residual::{ExprPair, Residual};
use crate::scalar::{im, re, Real};
use crate::strength::FieldStrength;

/// Which physical role a current density plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentFlavor {
    /// Defined by the inhomogeneous operator equation; transforms by
    /// conjugation and is conserved under the bracket-extended divergence.
    Real,
    /// The commutator-sourced piece `-i kappa c [A_m, F^{mn}]`; vanishes
    /// identically for commuting potentials.
    Virtual,
    /// Real plus virtual: `c d_m F^{mn}`, conserved under the plain
    /// divergence.
    Total,
    /// Supplied externally rather than derived from a potential.
    Prescribed,
}

/// A four-current density `j^n` (contravariant components).
#[derive(Debug, Clone)]
pub struct CurrentDensity<T: Real> {
    flavor: CurrentFlavor,
    components: [OperatorFieldExpr<T>; 4],
}

/// Fold a sum of same-symmetry terms without seeding it with a zero field,
/// so the symmetry class of the terms survives into the sum.
fn sum_terms<T: Real>(
    dim: usize,
    terms: impl IntoIterator<Item = Result<OperatorFieldExpr<T>>>,
) -> Result<OperatorFieldExpr<T>> {
    let mut acc: Option<OperatorFieldExpr<T>> = None;
    for term in terms {
        let term = term?;
        acc = Some(match acc {
            Some(s) => s.add(&term)?,
            None => term,
        });
    }
    Ok(acc.unwrap_or_else(|| OperatorFieldExpr::zero(dim)))
}

fn contracted_divergence<T: Real>(f: &FieldStrength<T>, nu: usize) -> Result<OperatorFieldExpr<T>> {
    // d_m F^{mn} for fixed n.
    sum_terms(
        f.dim(),
        (0..4)
            .filter(|mu| *mu != nu)
            .map(|mu| f.upper(mu, nu).derivative(mu)),
    )
}

fn contracted_bracket<T: Real>(
    a: &GaugePotential<T>,
    f: &FieldStrength<T>,
    nu: usize,
) -> Result<OperatorFieldExpr<T>> {
    // [A_m, F^{mn}] for fixed n.
    sum_terms(
        f.dim(),
        (0..4)
            .filter(|mu| *mu != nu)
            .map(|mu| a.component(mu).commutator(f.upper(mu, nu))),
    )
}

impl<T: Real> CurrentDensity<T> {
    /// The induced current `j^n = c (d_m F^{mn} + i kappa [A_m, F^{mn}])`.
    pub fn induced(a: &GaugePotential<T>, constants: &PhysicalConstants<T>) -> Result<Self> {
        let f = FieldStrength::commutator_form(a, constants)?;
        let kappa = constants.kappa();
        let c = constants.c;
        let components = build4(|nu| {
            Ok(contracted_divergence(&f, nu)?
                .add(&contracted_bracket(a, &f, nu)?.scale(im(kappa)))?
                .scale(re(c)))
        })?;
        Ok(Self {
            flavor: CurrentFlavor::Real,
            components,
        })
    }

    /// The virtual current `-i kappa c [A_m, F^{mn}]`.
    pub fn virtual_part(a: &GaugePotential<T>, constants: &PhysicalConstants<T>) -> Result<Self> {
        let f = FieldStrength::commutator_form(a, constants)?;
        let kappa = constants.kappa();
        let c = constants.c;
        let components = build4(|nu| Ok(contracted_bracket(a, &f, nu)?.scale(im(-kappa * c))))?;
        Ok(Self {
            flavor: CurrentFlavor::Virtual,
            components,
        })
    }

    /// The total current `c d_m F^{mn}`, built directly rather than as a
    /// sum, so the decomposition check compares two independent routes.
    pub fn total(a: &GaugePotential<T>, constants: &PhysicalConstants<T>) -> Result<Self> {
        let f = FieldStrength::commutator_form(a, constants)?;
        let c = constants.c;
        let components = build4(|nu| Ok(contracted_divergence(&f, nu)?.scale(re(c))))?;
        Ok(Self {
            flavor: CurrentFlavor::Total,
            components,
        })
    }

    /// An externally supplied current.
    pub fn prescribed(components: [OperatorFieldExpr<T>; 4]) -> Result<Self> {
        let dim = components[0].dim();
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: c.dim(),
                });
            }
        }
        Ok(Self {
            flavor: CurrentFlavor::Prescribed,
            components,
        })
    }

    pub fn flavor(&self) -> CurrentFlavor {
        self.flavor
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    /// `j^nu`.
    pub fn component(&self, nu: usize) -> &OperatorFieldExpr<T> {
        &self.components[nu]
    }

    pub fn components(&self) -> &[OperatorFieldExpr<T>; 4] {
        &self.components
    }

    /// Componentwise sum (flavors are not tracked through arithmetic; the
    /// result is marked prescribed).
    pub fn add(&self, other: &Self) -> Result<Self> {
        let components = build4(|nu| self.components[nu].add(&other.components[nu]))?;
        Ok(Self {
            flavor: CurrentFlavor::Prescribed,
            components,
        })
    }
}

fn build4<T: Real>(
    mut f: impl FnMut(usize) -> Result<OperatorFieldExpr<T>>,
) -> Result<[OperatorFieldExpr<T>; 4]> {
    let mut v = Vec::with_capacity(4);
    for nu in 0..4 {
        v.push(f(nu)?);
    }
    Ok(v.try_into().expect("four components"))
}

/// Plain divergence `d_n j^n`.
pub fn divergence<T: Real>(j: &CurrentDensity<T>) -> Result<OperatorFieldExpr<T>> {
    sum_terms(j.dim(), (0..4).map(|nu| j.component(nu).derivative(nu)))
}

/// Bracket-extended divergence `d_n j^n + i kappa [A_n, j^n]`.
pub fn covariant_divergence<T: Real>(
    j: &CurrentDensity<T>,
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<OperatorFieldExpr<T>> {
    let kappa = constants.kappa();
    divergence(j)?.add(&potential_current_bracket(a, j)?.scale(im(kappa)))
}

/// `sum_m [A_m, j^m]`: the obstruction to the virtual current being
/// separately conserved.
pub fn potential_current_bracket<T: Real>(
    a: &GaugePotential<T>,
    j: &CurrentDensity<T>,
) -> Result<OperatorFieldExpr<T>> {
    sum_terms(
        j.dim(),
        (0..4).map(|mu| a.component(mu).commutator(j.component(mu))),
    )
}

/// Homogeneous identity, one pair per `n`:
/// `d_m *F^{mn} + i kappa [A_m, *F^{mn}]` against zero.
pub fn homogeneous_pairs<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<Vec<(usize, ExprPair<T>)>> {
    let dual = FieldStrength::commutator_form(a, constants)?.dual();
    let kappa = constants.kappa();
    let mut out = Vec::with_capacity(4);
    for nu in 0..4 {
        let lhs = contracted_divergence(&dual, nu)?
            .add(&contracted_bracket(a, &dual, nu)?.scale(im(kappa)))?;
        out.push((nu, ExprPair::new(lhs, OperatorFieldExpr::zero(a.dim()))));
    }
    Ok(out)
}

/// `d_n J^n` for the total current, against zero.
pub fn total_conservation_pair<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<ExprPair<T>> {
    let total = CurrentDensity::total(a, constants)?;
    Ok(ExprPair::new(
        divergence(&total)?,
        OperatorFieldExpr::zero(a.dim()),
    ))
}

/// Total vs real + virtual, one pair per component.
pub fn decomposition_pairs<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<Vec<(usize, ExprPair<T>)>> {
    let total = CurrentDensity::total(a, constants)?;
    let real = CurrentDensity::induced(a, constants)?;
    let virt = CurrentDensity::virtual_part(a, constants)?;
    let mut out = Vec::with_capacity(4);
    for nu in 0..4 {
        out.push((
            nu,
            ExprPair::new(
                total.component(nu).clone(),
                real.component(nu).add(virt.component(nu))?,
            ),
        ));
    }
    Ok(out)
}

/// Bracket-extended divergence of the induced current, against zero.
pub fn real_conservation_pair<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<ExprPair<T>> {
    let real = CurrentDensity::induced(a, constants)?;
    Ok(ExprPair::new(
        covariant_divergence(&real, a, constants)?,
        OperatorFieldExpr::zero(a.dim()),
    ))
}

/// Plain divergence of the virtual current, against zero. Guaranteed only
/// when `[A_m, j^m]` vanishes; reported otherwise.
pub fn virtual_conservation_pair<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<ExprPair<T>> {
    let virt = CurrentDensity::virtual_part(a, constants)?;
    Ok(ExprPair::new(
        divergence(&virt)?,
        OperatorFieldExpr::zero(a.dim()),
    ))
}

/// The two readings of the bracket-balance relation between `[A_m, j^m]`
/// and `d_n [A_m, F^{mn}]`.
#[derive(Debug, Clone)]
pub struct CurrentBracketIdentity<T: Real> {
    /// `[A_m, j^m] + c d_n [A_m, F^{mn}]` against zero; an identity for the
    /// induced current.
    pub combined: ExprPair<T>,
    /// `[A_m, j^m]` against `d_n [A_m, F^{mn}]`: the same relation without
    /// the compensating factor, satisfied only when both sides vanish.
    /// Reported, not enforced.
    pub split: ExprPair<T>,
}

/// Build both readings of the bracket-balance relation for the induced
/// current of `a`.
pub fn current_bracket_identity<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<CurrentBracketIdentity<T>> {
    let f = FieldStrength::commutator_form(a, constants)?;
    let j = CurrentDensity::induced(a, constants)?;
    let aj = potential_current_bracket(a, &j)?;
    let div_bracket = sum_terms(
        a.dim(),
        (0..4).map(|nu| contracted_bracket(a, &f, nu)?.derivative(nu)),
    )?;
    let c = constants.c;
    Ok(CurrentBracketIdentity {
        combined: ExprPair::new(
            aj.add(&div_bracket.scale(re(c)))?,
            OperatorFieldExpr::zero(a.dim()),
        ),
        split: ExprPair::new(aj, div_bracket),
    })
}

/// `j(A')^n` against `S j(A)^n S^-1`, one pair per component.
pub fn current_covariance_pairs<T: Real>(
    a: &GaugePotential<T>,
    gt: &GaugeTransformation<T>,
) -> Result<Vec<(usize, ExprPair<T>)>> {
    let j = CurrentDensity::induced(a, gt.constants())?;
    let j_prime = CurrentDensity::induced(&gt.transform_potential(a)?, gt.constants())?;
    let mut out = Vec::with_capacity(4);
    for nu in 0..4 {
        out.push((
            nu,
            ExprPair::new(
                j_prime.component(nu).clone(),
                gt.conjugate(j.component(nu))?,
            ),
        ));
    }
    Ok(out)
}

/// Outcome of sampling all the commutators that distinguish the operator
/// theory from the commuting one.
#[derive(Debug, Clone)]
pub struct CommutativityProbe<T: Real> {
    /// True when every sampled bracket is below tolerance.
    pub commutative: bool,
    /// Largest `[A_m, A_n]` residual over samples and index pairs.
    pub max_potential_bracket: Residual<T>,
    /// Largest `[A_m, F^{mn}]` residual over samples and indices.
    pub max_strength_bracket: Residual<T>,
}

/// Sample `[A_m, A_n]` and `[A_m, F^{mn}]` at the given points and decide
/// whether the potential is effectively commuting at tolerance `tol`
/// (relative to `1 +` the largest operand norm).
pub fn commutative_gauge_probe<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
    points: &[SpacetimePoint<T>],
    tol: T,
) -> Result<CommutativityProbe<T>> {
    let f = FieldStrength::commutator_form(a, constants)?;
    let zero = OperatorFieldExpr::zero(a.dim());
    let mut max_aa = Residual::zero();
    let mut max_af = Residual::zero();
    for x in points {
        for mu in 0..4 {
            for nu in (mu + 1)..4 {
                let pair =
                    ExprPair::new(a.component(mu).commutator(a.component(nu))?, zero.clone());
                max_aa = max_aa.max(pair.residual_at(x)?);
            }
            for nu in 0..4 {
                if nu == mu {
                    continue;
                }
                let pair =
                    ExprPair::new(a.component(mu).commutator(f.upper(mu, nu))?, zero.clone());
                max_af = max_af.max(pair.residual_at(x)?);
            }
        }
    }
    Ok(CommutativityProbe {
        commutative: max_aa.within(tol) && max_af.within(tol),
        max_potential_bracket: max_aa,
        max_strength_bracket: max_af,
    })
}

/// Operator-theory induced current against the ordinary (bracket-free)
/// one, per component; the two coincide exactly when the probe reports a
/// commuting potential.
pub fn classical_reduction_pairs<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<Vec<(usize, ExprPair<T>)>> {
    let j = CurrentDensity::induced(a, constants)?;
    let ordinary = CurrentDensity::total(a, constants)?;
    let mut out = Vec::with_capacity(4);
    for nu in 0..4 {
        out.push((
            nu,
            ExprPair::new(j.component(nu).clone(), ordinary.component(nu).clone()),
        ));
    }
    Ok(out)
}
