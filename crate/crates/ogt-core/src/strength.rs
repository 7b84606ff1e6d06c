//! The operator field-strength tensor, its dual, and the corrected electric
//! and magnetic fields.
//!
//! Two independent constructions are kept side by side: the explicit
//! commutator form `F_mn = d_m A_n - d_n A_m + i kappa [A_m, A_n]` and the
//! first-kind-derivative form `F_mn = D_m A_n - D_n A_m`. They agree
//! algebraically; the verification suite holds them to 1e-12 relative as
//! evaluated fields.
//!
//! Conventions (fixed across the workspace): metric `diag(+1,-1,-1,-1)`,
//! covariant components stored with `A_0 = phi`, `E_i = F_{0i}`,
//! `B_k = -1/2 eps_{kij} F_{ij}`, `eps^{0123} = +1`, index raising flips the
//! sign of each spatial index.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::field::{OperatorFieldExpr, Symmetry};
use crate::gauge::{covariant_derivative_first, GaugePotential, GaugeTransformation};
use crate::residual::ExprPair;
use crate::scalar::{im, re, Real};

/// Metric sign `g_{mu mu}`: `+1` for time, `-1` for space.
pub fn metric_sign<T: Real>(mu: usize) -> T {
    if mu == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Sign of the permutation `(mu, nu, alpha, beta)` of `(0,1,2,3)`, with
/// `eps^{0123} = +1`; zero for repeated indices.
pub fn levi_civita(indices: [usize; 4]) -> i32 {
    let mut p = indices;
    let mut sign = 1i32;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] == p[j] {
                return 0;
            }
            if p[i] > p[j] {
                p.swap(i, j);
                sign = -sign;
            }
        }
    }
    sign
}

/// Which algebraic route produced a [`FieldStrength`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrengthRoute {
    /// `d_m A_n - d_n A_m + i kappa [A_m, A_n]`
    Commutator,
    /// `D_m A_n - D_n A_m` with the first-kind derivative
    Derivative,
    /// Built by dualization rather than from a potential directly
    Dual,
}

/// Three spatial operator-field components (E, B, P, M, D, or H by role).
#[derive(Debug, Clone)]
pub struct FieldVector3<T: Real> {
    components: [OperatorFieldExpr<T>; 3],
}

impl<T: Real> FieldVector3<T> {
    pub fn new(components: [OperatorFieldExpr<T>; 3]) -> Result<Self> {
        let dim = components[0].dim();
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: c.dim(),
                });
            }
        }
        Ok(Self { components })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            components: std::array::from_fn(|_| OperatorFieldExpr::zero(dim)),
        }
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    /// Physics-indexed access, `i` in `1..=3`.
    pub fn component(&self, i: usize) -> Result<&OperatorFieldExpr<T>> {
        if (1..=3).contains(&i) {
            Ok(&self.components[i - 1])
        } else {
            Err(Error::SpatialIndex { index: i })
        }
    }

    pub fn components(&self) -> &[OperatorFieldExpr<T>; 3] {
        &self.components
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new([
            self.components[0].add(&other.components[0])?,
            self.components[1].add(&other.components[1])?,
            self.components[2].add(&other.components[2])?,
        ])
    }

    /// Componentwise scalar multiple (real).
    pub fn scale(&self, k: T) -> Self {
        Self {
            components: std::array::from_fn(|i| self.components[i].scale(re(k))),
        }
    }
}

/// Antisymmetric operator tensor `F_{mu nu}` with both index positions
/// stored.
#[derive(Debug, Clone)]
pub struct FieldStrength<T: Real> {
    constants: PhysicalConstants<T>,
    route: StrengthRoute,
    /// `F_{mu nu}`; the lower triangle shares nodes with the upper one
    /// through negation, and the diagonal is the zero field.
    lower: [[OperatorFieldExpr<T>; 4]; 4],
    /// `F^{mu nu}` with indices raised by the metric.
    upper: [[OperatorFieldExpr<T>; 4]; 4],
}

fn assemble<T: Real>(
    dim: usize,
    mut component: impl FnMut(usize, usize) -> Result<OperatorFieldExpr<T>>,
) -> Result<[[OperatorFieldExpr<T>; 4]; 4]> {
    // Build the upper triangle once; derive the rest by antisymmetry so
    // F_{nu mu} = -F_{mu nu} holds structurally, not merely numerically.
    let zero = OperatorFieldExpr::zero(dim);
    let mut grid: Vec<Vec<OperatorFieldExpr<T>>> = vec![vec![zero; 4]; 4];
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let f = component(mu, nu)?;
            grid[nu][mu] = f.scale(re(-T::one()));
            grid[mu][nu] = f;
        }
    }
    let mut rows = grid.into_iter();
    Ok(std::array::from_fn(|_| {
        let row: Vec<_> = rows.next().expect("four rows").into_iter().collect();
        row.try_into().expect("four columns")
    }))
}

fn raise_indices<T: Real>(
    lower: &[[OperatorFieldExpr<T>; 4]; 4],
) -> [[OperatorFieldExpr<T>; 4]; 4] {
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            let sign = metric_sign::<T>(mu) * metric_sign::<T>(nu);
            if sign == T::one() {
                lower[mu][nu].clone()
            } else {
                lower[mu][nu].scale(re(sign))
            }
        })
    })
}

impl<T: Real> FieldStrength<T> {
    /// `F_mn = d_m A_n - d_n A_m + i kappa [A_m, A_n]`.
    pub fn commutator_form(
        a: &GaugePotential<T>,
        constants: &PhysicalConstants<T>,
    ) -> Result<Self> {
        let kappa = constants.kappa();
        let lower = assemble(a.dim(), |mu, nu| {
            let curl = a
                .component(nu)
                .derivative(mu)?
                .sub(&a.component(mu).derivative(nu)?)?;
            let bracket = a
                .component(mu)
                .commutator(a.component(nu))?
                .scale(im(kappa));
            curl.add(&bracket)
        })?;
        let upper = raise_indices(&lower);
        Ok(Self {
            constants: *constants,
            route: StrengthRoute::Commutator,
            lower,
            upper,
        })
    }

    /// `F_mn = D_m A_n - D_n A_m` with the first-kind derivative; agrees
    /// with the commutator form algebraically and is kept as an independent
    /// construction for the equivalence check.
    pub fn derivative_form(
        a: &GaugePotential<T>,
        constants: &PhysicalConstants<T>,
    ) -> Result<Self> {
        let lower = assemble(a.dim(), |mu, nu| {
            let dmn = covariant_derivative_first(a, constants, a.component(nu), mu)?;
            let dnm = covariant_derivative_first(a, constants, a.component(mu), nu)?;
            // Hermitian by the same algebra as the commutator form.
            Ok(dmn.sub(&dnm)?.claim_symmetry(Symmetry::Hermitian))
        })?;
        let upper = raise_indices(&lower);
        Ok(Self {
            constants: *constants,
            route: StrengthRoute::Derivative,
            lower,
            upper,
        })
    }

    pub fn route(&self) -> StrengthRoute {
        self.route
    }

    pub fn constants(&self) -> &PhysicalConstants<T> {
        &self.constants
    }

    pub fn dim(&self) -> usize {
        self.lower[0][1].dim()
    }

    /// `F_{mu nu}`.
    pub fn lower(&self, mu: usize, nu: usize) -> &OperatorFieldExpr<T> {
        &self.lower[mu][nu]
    }

    /// `F^{mu nu}`.
    pub fn upper(&self, mu: usize, nu: usize) -> &OperatorFieldExpr<T> {
        &self.upper[mu][nu]
    }

    /// `*F^{mu nu} = 1/2 eps^{mu nu alpha beta} F_{alpha beta}`. Double
    /// dualization negates the original (Lorentzian signature).
    pub fn dual(&self) -> Self {
        let dim = self.dim();
        let upper = std::array::from_fn(|mu| {
            std::array::from_fn(|nu| {
                if mu == nu {
                    return OperatorFieldExpr::zero(dim);
                }
                // The two remaining indices, in either order, give equal
                // eps * F products; keep the alpha < beta one.
                let mut rest = (0..4).filter(|k| *k != mu && *k != nu);
                let alpha = rest.next().expect("two indices remain");
                let beta = rest.next().expect("two indices remain");
                let sign = levi_civita([mu, nu, alpha, beta]);
                debug_assert!(sign != 0);
                let f = &self.lower[alpha][beta];
                if sign == 1 {
                    f.clone()
                } else {
                    f.scale(re(-T::one()))
                }
            })
        });
        // Lower the indices of *F^{mu nu} with the metric.
        let lower = std::array::from_fn(|mu: usize| {
            std::array::from_fn(|nu: usize| {
                let sign = metric_sign::<T>(mu) * metric_sign::<T>(nu);
                let f: &OperatorFieldExpr<T> = &upper[mu][nu];
                if sign == T::one() {
                    f.clone()
                } else {
                    f.scale(re(sign))
                }
            })
        });
        Self {
            constants: self.constants,
            route: StrengthRoute::Dual,
            lower,
            upper,
        }
    }

    /// `E_i = F_{0i}`, `i` in `1..=3`.
    pub fn electric_field(&self) -> Result<FieldVector3<T>> {
        FieldVector3::new([
            self.lower[0][1].clone(),
            self.lower[0][2].clone(),
            self.lower[0][3].clone(),
        ])
    }

    /// `B_k = -1/2 eps_{kij} F_{ij}`: `B_1 = -F_{23}`, `B_2 = F_{13}`,
    /// `B_3 = -F_{12}`.
    pub fn magnetic_field(&self) -> Result<FieldVector3<T>> {
        let neg = re(-T::one());
        FieldVector3::new([
            self.lower[2][3].scale(neg),
            self.lower[1][3].clone(),
            self.lower[1][2].scale(neg),
        ])
    }
}

/// The classical (derivative-only) part `d_m A_n - d_n A_m`: the "old"
/// fields before the operator correction.
pub fn classical_part<T: Real>(
    a: &GaugePotential<T>,
    mu: usize,
    nu: usize,
) -> Result<OperatorFieldExpr<T>> {
    a.component(nu)
        .derivative(mu)?
        .sub(&a.component(mu).derivative(nu)?)
}

/// The operator correction `i kappa [A_m, A_n]`: what the bracket adds on
/// top of the classical tensor.
pub fn bracket_part<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
    mu: usize,
    nu: usize,
) -> Result<OperatorFieldExpr<T>> {
    Ok(a.component(mu)
        .commutator(a.component(nu))?
        .scale(im(constants.kappa())))
}

/// The six upper-triangle pairs comparing the two constructions.
pub fn equivalence_pairs<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<Vec<(usize, usize, ExprPair<T>)>> {
    let fc = FieldStrength::commutator_form(a, constants)?;
    let fd = FieldStrength::derivative_form(a, constants)?;
    let mut out = Vec::with_capacity(6);
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            out.push((
                mu,
                nu,
                ExprPair::new(fc.lower(mu, nu).clone(), fd.lower(mu, nu).clone()),
            ));
        }
    }
    Ok(out)
}

/// The six pairs `F(A')_{mu nu}` vs `S F(A)_{mu nu} S^-1`.
pub fn covariance_pairs<T: Real>(
    a: &GaugePotential<T>,
    gt: &GaugeTransformation<T>,
) -> Result<Vec<(usize, usize, ExprPair<T>)>> {
    let f = FieldStrength::commutator_form(a, gt.constants())?;
    let f_prime = FieldStrength::commutator_form(&gt.transform_potential(a)?, gt.constants())?;
    let mut out = Vec::with_capacity(6);
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            out.push((
                mu,
                nu,
                ExprPair::new(
                    f_prime.lower(mu, nu).clone(),
                    gt.conjugate(f.lower(mu, nu))?,
                ),
            ));
        }
    }
    Ok(out)
}

/// The six components of `F(transform_potential(0, S))`, each paired with
/// zero: a pure-gauge potential is flat.
pub fn pure_gauge_flatness_pairs<T: Real>(
    gt: &GaugeTransformation<T>,
) -> Result<Vec<(usize, usize, ExprPair<T>)>> {
    let dim = gt.dim();
    let a_prime = gt.transform_potential(&GaugePotential::zero(dim))?;
    let f = FieldStrength::commutator_form(&a_prime, gt.constants())?;
    let mut out = Vec::with_capacity(6);
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            out.push((
                mu,
                nu,
                ExprPair::new(f.lower(mu, nu).clone(), OperatorFieldExpr::zero(dim)),
            ));
        }
    }
    Ok(out)
}

///`[D_mu, D_nu] f = i kappa F_{mu nu} f`: the bracket of first-kind
/// derivatives acting on a test field reproduces the tensor.
pub fn commutator_route_pair<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
    f: &OperatorFieldExpr<T>,
    mu: usize,
    nu: usize,
) -> Result<ExprPair<T>> {
    let dmu_f = covariant_derivative_first(a, constants, f, mu)?;
    let dnu_f = covariant_derivative_first(a, constants, f, nu)?;
    let lhs = covariant_derivative_first(a, constants, &dnu_f, mu)?
        .sub(&covariant_derivative_first(a, constants, &dmu_f, nu)?)?;
    let strength = FieldStrength::commutator_form(a, constants)?;
    let rhs = strength.lower(mu, nu).mul(f)?.scale(im(constants.kappa()));
    Ok(ExprPair::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AnalyticOperatorField, AnalyticScalar, SpacetimePoint};
    use crate::gauge::GaugeGenerator;
    use crate::matrix::{random_hermitian, OperatorMatrix};
    use crate::residual::Residual;

    type E = OperatorFieldExpr<f64>;

    fn natural() -> PhysicalConstants<f64> {
        PhysicalConstants::natural()
    }

    fn probe() -> SpacetimePoint<f64> {
        SpacetimePoint::new([0.17, 0.82, -0.36, 0.59])
    }

    fn sigma_x() -> OperatorMatrix<f64> {
        OperatorMatrix::from_fn(2, |i, j| if i != j { re(1.0) } else { re(0.0) })
    }

    fn sigma_y() -> OperatorMatrix<f64> {
        let mut m = OperatorMatrix::zeros(2);
        m.set(0, 1, im(-1.0));
        m.set(1, 0, im(1.0));
        m
    }

    fn sigma_z() -> OperatorMatrix<f64> {
        OperatorMatrix::from_diag(&[re(1.0), re(-1.0)])
    }

    fn hermitian_field(dim: usize, seed: u64) -> E {
        let mut f = AnalyticOperatorField::term(
            random_hermitian::<f64>(dim, seed, 0.8),
            AnalyticScalar::monomial(0.5, [1, 0, 1, 0]),
        );
        f.push_term(
            random_hermitian::<f64>(dim, seed + 500, 0.6),
            AnalyticScalar::cosine(0.9, [0.6, 0.2, -0.5, 0.4], 0.2),
        )
        .unwrap();
        OperatorFieldExpr::leaf(f)
    }

    fn random_potential(dim: usize, seed: u64) -> GaugePotential<f64> {
        GaugePotential::new(std::array::from_fn(|mu| {
            hermitian_field(dim, seed + 10 * mu as u64)
        }))
        .unwrap()
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita([0, 1, 2, 3]), 1);
        assert_eq!(levi_civita([1, 0, 2, 3]), -1);
        assert_eq!(levi_civita([2, 3, 0, 1]), 1);
        assert_eq!(levi_civita([0, 0, 2, 3]), 0);
    }

    #[test]
    fn zero_potential_has_zero_strength() {
        let f = FieldStrength::commutator_form(&GaugePotential::zero(2), &natural()).unwrap();
        let x = probe();
        for mu in 0..4 {
            for nu in 0..4 {
                assert_eq!(f.lower(mu, nu).eval(&x).unwrap().frobenius_norm(), 0.0);
            }
        }
    }

    #[test]
    fn constant_pauli_potential_gives_pure_bracket() {
        // A_0 = a sx, A_1 = b sy constant: F_01 = i kappa a b [sx, sy] = -2 kappa a b sz.
        let (a_c, b_c) = (0.8, -0.6);
        let k = natural();
        let a = GaugePotential::new([
            E::constant(sigma_x().scale(re(a_c))),
            E::constant(sigma_y().scale(re(b_c))),
            E::zero(2),
            E::zero(2),
        ])
        .unwrap();
        let f = FieldStrength::commutator_form(&a, &k).unwrap();
        let expected = sigma_z().scale(re(-2.0 * k.kappa() * a_c * b_c));
        let got = f.lower(0, 1).eval(&probe()).unwrap();
        assert!(Residual::between(&got, &expected).within(1e-14));
    }

    #[test]
    fn abelian_strength_matches_scalar_reference() {
        // Plane-wave Abelian potential: componentwise scalar fields times I.
        let id = OperatorMatrix::<f64>::identity(2);
        let waves: [AnalyticScalar<f64>; 4] = [
            AnalyticScalar::cosine(0.7, [0.3, -0.2, 0.5, 0.1], 0.0),
            AnalyticScalar::sine(1.1, [0.4, 0.8, -0.1, 0.2], 0.3),
            AnalyticScalar::cosine(0.5, [-0.6, 0.1, 0.9, 0.7], 0.8),
            AnalyticScalar::sine(0.9, [0.2, 0.5, 0.3, -0.4], 0.5),
        ];
        let a = GaugePotential::new(std::array::from_fn(|mu| {
            E::leaf(AnalyticOperatorField::term(id.clone(), waves[mu].clone()))
        }))
        .unwrap();
        let f = FieldStrength::commutator_form(&a, &natural()).unwrap();
        let x = probe();
        for mu in 0..4 {
            for nu in 0..4 {
                // classical scalar reference: d_mu a_nu - d_nu a_mu
                let expected =
                    waves[nu].derivative(mu).eval(&x) - waves[mu].derivative(nu).eval(&x);
                let got = f.lower(mu, nu).eval(&x).unwrap();
                let r = Residual::between(&got, &id.scale(re(expected)));
                assert!(r.within(1e-13), "({mu},{nu}): {:.3e}", r.relative());
            }
        }
    }

    #[test]
    fn antisymmetry_is_exact() {
        let a = random_potential(2, 1);
        let f = FieldStrength::commutator_form(&a, &natural()).unwrap();
        let x = probe();
        for mu in 0..4 {
            for nu in 0..4 {
                let fmn = f.lower(mu, nu).eval(&x).unwrap();
                let fnm = f.lower(nu, mu).eval(&x).unwrap();
                assert_eq!(fmn.add(&fnm).frobenius_norm(), 0.0);
            }
        }
    }

    #[test]
    fn strength_components_are_hermitian() {
        let a = random_potential(3, 2);
        let x = probe();
        for form in [
            FieldStrength::commutator_form(&a, &natural()).unwrap(),
            FieldStrength::derivative_form(&a, &natural()).unwrap(),
        ] {
            for mu in 0..4 {
                for nu in (mu + 1)..4 {
                    assert_eq!(form.lower(mu, nu).symmetry(), Symmetry::Hermitian);
                    let v = form.lower(mu, nu).eval(&x).unwrap();
                    assert!(v.hermiticity_defect() <= 1e-12 * (1.0 + v.frobenius_norm()));
                }
            }
        }
    }

    #[test]
    fn both_routes_agree() {
        let a = random_potential(3, 3);
        let x = probe();
        for (mu, nu, pair) in equivalence_pairs(&a, &natural()).unwrap() {
            let r = pair.residual_at(&x).unwrap();
            assert!(r.within(1e-12), "({mu},{nu}): {:.3e}", r.relative());
        }
    }

    #[test]
    fn strength_is_gauge_covariant() {
        let a = random_potential(2, 4);
        let gt = GaugeTransformation::new(
            GaugeGenerator::new(hermitian_field(2, 5)).unwrap(),
            natural(),
        )
        .unwrap();
        let x = probe();
        for (mu, nu, pair) in covariance_pairs(&a, &gt).unwrap() {
            let r = pair.residual_at(&x).unwrap();
            assert!(r.within(1e-10), "({mu},{nu}): {:.3e}", r.relative());
        }
    }

    #[test]
    fn pure_gauge_potential_is_flat() {
        let gt = GaugeTransformation::new(
            GaugeGenerator::new(hermitian_field(2, 6)).unwrap(),
            natural(),
        )
        .unwrap();
        let x = probe();
        for (mu, nu, pair) in pure_gauge_flatness_pairs(&gt).unwrap() {
            let r = pair.residual_at(&x).unwrap();
            assert!(r.within(1e-10), "({mu},{nu}): {:.3e}", r.relative());
        }
    }

    #[test]
    fn derivative_commutator_reproduces_strength() {
        let a = random_potential(2, 7);
        let f = hermitian_field(2, 8);
        let x = probe();
        for (mu, nu) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            let pair = commutator_route_pair(&a, &natural(), &f, mu, nu).unwrap();
            let r = pair.residual_at(&x).unwrap();
            assert!(r.within(1e-11), "({mu},{nu}): {:.3e}", r.relative());
        }
    }

    #[test]
    fn dual_moves_f01_to_the_23_slot() {
        // Only F_01 nonzero: *F^{23} = eps^{2301} F_{01} = F_01; check sign and
        // that other slots stay empty.
        let k = natural();
        let a = GaugePotential::new([
            E::leaf(AnalyticOperatorField::term(
                sigma_x(),
                AnalyticScalar::monomial(1.0, [0, 1, 0, 0]),
            )),
            E::zero(2),
            E::zero(2),
            E::zero(2),
        ])
        .unwrap();
        // F_01 = -d_1 A_0 = -sx; all other components zero.
        let f = FieldStrength::commutator_form(&a, &k).unwrap();
        let x = probe();
        let dual = f.dual();
        let f01 = f.lower(0, 1).eval(&x).unwrap();
        assert!(f01.frobenius_norm() > 0.5);
        let expected = f01.scale(re(levi_civita([2, 3, 0, 1]) as f64));
        let got = dual.upper(2, 3).eval(&x).unwrap();
        assert!(Residual::between(&got, &expected).within(1e-14));
        for (mu, nu) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(dual.upper(mu, nu).eval(&x).unwrap().frobenius_norm(), 0.0);
        }
    }

    #[test]
    fn double_dual_negates() {
        let a = random_potential(2, 9);
        let f = FieldStrength::commutator_form(&a, &natural()).unwrap();
        let dd = f.dual().dual();
        let x = probe();
        for mu in 0..4 {
            for nu in 0..4 {
                let got = dd.upper(mu, nu).eval(&x).unwrap();
                let expected = f.upper(mu, nu).eval(&x).unwrap().scale(re(-1.0));
                let r = Residual::between(&got, &expected);
                assert!(r.within(1e-13), "({mu},{nu}): {:.3e}", r.relative());
            }
        }
    }

    #[test]
    fn static_abelian_gradient_gives_classical_e_field() {
        // phi = x^1 times identity, spatial potential zero: E = (-1, 0, 0) I, B = 0.
        let id = OperatorMatrix::<f64>::identity(2);
        let a = GaugePotential::new([
            E::leaf(AnalyticOperatorField::term(
                id.clone(),
                AnalyticScalar::coordinate(1).unwrap(),
            )),
            E::zero(2),
            E::zero(2),
            E::zero(2),
        ])
        .unwrap();
        let f = FieldStrength::commutator_form(&a, &natural()).unwrap();
        let x = probe();
        let e = f.electric_field().unwrap();
        let b = f.magnetic_field().unwrap();
        assert!(Residual::between(
            &e.component(1).unwrap().eval(&x).unwrap(),
            &id.scale(re(-1.0)),
        )
        .within(1e-14));
        for i in 2..=3 {
            assert_eq!(
                e.component(i).unwrap().eval(&x).unwrap().frobenius_norm(),
                0.0
            );
        }
        for k in 1..=3 {
            assert_eq!(
                b.component(k).unwrap().eval(&x).unwrap().frobenius_norm(),
                0.0
            );
        }
        assert!(e.component(0).is_err());
        assert!(e.component(4).is_err());
    }

    #[test]
    fn constant_pauli_spatial_potential_gives_bracket_b3() {
        // Contravariant A^1 = a sx, A^2 = b sy (covariant components negated):
        // B_3 = -F_12 = -i kappa [A_1, A_2] = 2 kappa a b sz.
        let (a_c, b_c) = (0.75, 0.4);
        let k = natural();
        let a = GaugePotential::new([
            E::zero(2),
            E::constant(sigma_x().scale(re(-a_c))),
            E::constant(sigma_y().scale(re(-b_c))),
            E::zero(2),
        ])
        .unwrap();
        let f = FieldStrength::commutator_form(&a, &k).unwrap();
        let b = f.magnetic_field().unwrap();
        let got = b.component(3).unwrap().eval(&probe()).unwrap();
        let expected = sigma_z().scale(re(2.0 * k.kappa() * a_c * b_c));
        assert!(Residual::between(&got, &expected).within(1e-14));
        // The bracket part of F_12 accounts for all of it.
        let bracket = bracket_part(&a, &k, 1, 2).unwrap().eval(&probe()).unwrap();
        let classical = classical_part(&a, 1, 2).unwrap().eval(&probe()).unwrap();
        assert_eq!(classical.frobenius_norm(), 0.0);
        assert!(Residual::between(&bracket, &got.scale(re(-1.0))).within(1e-14));
    }

    #[test]
    fn abelian_bracket_parts_vanish() {
        let id = OperatorMatrix::<f64>::identity(3);
        let a = GaugePotential::new(std::array::from_fn(|mu| {
            E::leaf(AnalyticOperatorField::term(
                id.scale(re(1.0 + mu as f64)),
                AnalyticScalar::sine(0.8, [0.1, 0.7, -0.2, 0.4], 0.1),
            ))
        }))
        .unwrap();
        let x = probe();
        for mu in 0..4 {
            for nu in (mu + 1)..4 {
                let b = bracket_part(&a, &natural(), mu, nu).unwrap();
                assert!(b.eval(&x).unwrap().frobenius_norm() <= 1e-14);
            }
        }
    }
}
