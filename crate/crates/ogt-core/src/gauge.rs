//! Operator-valued gauge transformations and the two generalized
//! derivatives.
//!
//! The generator `L(x)` is a Hermitian operator field. The transformation
//! operator is `S = exp(-i kappa L)` with `kappa = q / (hbar c)`, its inverse
//! the exponential of the opposite argument (never a numeric matrix
//! inverse). Quantities transform as
//!
//! ```text
//! A'_mu = S A_mu S^-1 + (i hbar c / q) (d_mu S) S^-1
//! G'    = S G S^-1
//! psi'  = S psi
//! H'    = S H S^-1 + i hbar (d_t S) S^-1,   d_t = c d_0
//! ```
//!
//! This is the unique sign pairing under which the Abelian case reduces to
//! `A + dL`, the field strength conjugates covariantly, and the energy
//! operator `H - q phi` conjugates with no leftover derivative term. Both
//! derivatives `D_mu = d_mu + i kappa A_mu` (left action) and
//! `Dcal_mu = d_mu + i kappa [A_mu, .]` (adjoint action) are provided, with
//! their covariance identities packaged as checkable expression pairs.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::field::{OperatorFieldExpr, SpacetimePoint, Symmetry};
use crate::matrix::state_norm;
use crate::residual::ExprPair;
use crate::scalar::{im, re, Real, C};

/// A Hermitian operator field acting as the gauge generator.
#[derive(Debug, Clone)]
pub struct GaugeGenerator<T: Real> {
    lambda: OperatorFieldExpr<T>,
}

impl<T: Real> GaugeGenerator<T> {
    /// Requires the expression to carry the Hermitian class already, either
    /// structurally or through [`OperatorFieldExpr::certified`].
    pub fn new(lambda: OperatorFieldExpr<T>) -> Result<Self> {
        if lambda.symmetry() != Symmetry::Hermitian {
            return Err(Error::SymmetryDefect {
                expected: "hermitian",
                defect: f64::NAN,
            });
        }
        Ok(Self { lambda })
    }

    /// Certifies an arbitrary expression Hermitian at the probe points, then
    /// wraps it.
    pub fn certified(
        lambda: &OperatorFieldExpr<T>,
        probes: &[SpacetimePoint<T>],
        tol: T,
    ) -> Result<Self> {
        let certified = lambda.certified(Symmetry::Hermitian, probes, tol)?;
        Ok(Self { lambda: certified })
    }

    pub fn expr(&self) -> &OperatorFieldExpr<T> {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }
}

/// Four covariant potential components `A_mu` with `A_0` the scalar
/// potential.
#[derive(Debug, Clone)]
pub struct GaugePotential<T: Real> {
    components: [OperatorFieldExpr<T>; 4],
}

impl<T: Real> GaugePotential<T> {
    /// All components must share a dimension and carry the Hermitian class.
    pub fn new(components: [OperatorFieldExpr<T>; 4]) -> Result<Self> {
        let dim = components[0].dim();
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: c.dim(),
                });
            }
            if c.symmetry() != Symmetry::Hermitian {
                return Err(Error::SymmetryDefect {
                    expected: "hermitian",
                    defect: f64::NAN,
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

    pub fn component(&self, mu: usize) -> &OperatorFieldExpr<T> {
        &self.components[mu]
    }

    pub fn components(&self) -> &[OperatorFieldExpr<T>; 4] {
        &self.components
    }

    /// The scalar potential `phi = A_0`.
    pub fn scalar_potential(&self) -> &OperatorFieldExpr<T> {
        &self.components[0]
    }
}

/// `S = exp(-i kappa L)` together with its exact inverse and the constants.
#[derive(Debug, Clone)]
pub struct GaugeTransformation<T: Real> {
    constants: PhysicalConstants<T>,
    generator: GaugeGenerator<T>,
    s: OperatorFieldExpr<T>,
    s_inv: OperatorFieldExpr<T>,
}

impl<T: Real> GaugeTransformation<T> {
    /// Fails for `q = 0`: the potential transformation carries a `1/q`
    /// factor, so a chargeless coupling has no gauge action.
    pub fn new(generator: GaugeGenerator<T>, constants: PhysicalConstants<T>) -> Result<Self> {
        if constants.is_chargeless() {
            return Err(Error::ZeroCoupling);
        }
        let kappa = constants.kappa();
        let s = generator.expr().scale(im(-kappa)).exp();
        let s_inv = generator.expr().scale(im(kappa)).exp();
        Ok(Self {
            constants,
            generator,
            s,
            s_inv,
        })
    }

    pub fn constants(&self) -> &PhysicalConstants<T> {
        &self.constants
    }

    pub fn generator(&self) -> &GaugeGenerator<T> {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// The transformation operator `S` (unitary by construction).
    pub fn operator(&self) -> &OperatorFieldExpr<T> {
        &self.s
    }

    /// `S^-1 = exp(+i kappa L)`, an exponential in its own right.
    pub fn inverse_operator(&self) -> &OperatorFieldExpr<T> {
        &self.s_inv
    }

    /// The transformation generated by `-L`; undoes this one.
    pub fn inverse(&self) -> Self {
        Self {
            constants: self.constants,
            generator: GaugeGenerator {
                lambda: self.generator.expr().scale(re(-T::one())),
            },
            s: self.s_inv.clone(),
            s_inv: self.s.clone(),
        }
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other,
            });
        }
        Ok(())
    }

    /// `S g S^-1`. Conjugation by a unitary preserves the symmetry class of
    /// `g`, so the result keeps it.
    pub fn conjugate(&self, g: &OperatorFieldExpr<T>) -> Result<OperatorFieldExpr<T>> {
        self.check_dim(g.dim())?;
        let raw = self.s.mul(g)?.mul(&self.s_inv)?;
        Ok(match g.symmetry() {
            Symmetry::Indefinite => raw,
            sym => raw.claim_symmetry(sym),
        })
    }

    /// Observables transform by conjugation alone.
    pub fn transform_observable(&self, g: &OperatorFieldExpr<T>) -> Result<OperatorFieldExpr<T>> {
        self.conjugate(g)
    }

    /// The inhomogeneous term `(i hbar c / q) (d_mu S) S^-1`.
    ///
    /// Anti-Hermitian times `i` equals Hermitian: with `S` unitary,
    /// `(d_mu S) S^-1` is anti-Hermitian, so the whole term is Hermitian and
    /// is marked as such.
    pub fn pure_gauge_term(&self, mu: usize) -> Result<OperatorFieldExpr<T>> {
        let k = &self.constants;
        let factor = C::new(T::zero(), k.hbar * k.c / k.q);
        let term = self.s.derivative(mu)?.mul(&self.s_inv)?.scale(factor);
        Ok(term.claim_symmetry(Symmetry::Hermitian))
    }

    /// `A'_mu = S A_mu S^-1 + (i hbar c / q)(d_mu S) S^-1`, all derivatives
    /// exact. Components stay Hermitian.
    pub fn transform_potential(&self, a: &GaugePotential<T>) -> Result<GaugePotential<T>> {
        self.check_dim(a.dim())?;
        let mut out: Vec<OperatorFieldExpr<T>> = Vec::with_capacity(4);
        for mu in 0..4 {
            let conjugated = self.conjugate(a.component(mu))?;
            let component = conjugated.add(&self.pure_gauge_term(mu)?)?;
            out.push(component.claim_symmetry(Symmetry::Hermitian));
        }
        let components: [OperatorFieldExpr<T>; 4] =
            out.try_into().expect("exactly four components");
        GaugePotential::new(components)
    }

    /// `psi' = S(x) psi`; requires a normalized input state.
    pub fn transform_state(&self, psi: &[C<T>], x: &SpacetimePoint<T>) -> Result<Vec<C<T>>> {
        self.check_dim(psi.len()).map_err(|_| Error::StateLength {
            len: psi.len(),
            dim: self.dim(),
        })?;
        let norm = state_norm(psi);
        if (norm - T::one()).abs() > crate::scalar::real::<T>(1e-12) {
            return Err(Error::StateNotNormalized {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        self.s.eval(x)?.matvec(psi)
    }

    /// `H' = S H S^-1 + i hbar (d_t S) S^-1` with `d_t = c d_0`.
    pub fn transform_hamiltonian(&self, h: &OperatorFieldExpr<T>) -> Result<OperatorFieldExpr<T>> {
        self.check_dim(h.dim())?;
        let conjugated = self.conjugate(h)?;
        conjugated.add(&self.hamiltonian_extra_term()?)
    }

    /// The gauge-dependent Hamiltonian shift `i hbar c (d_0 S) S^-1`.
    pub fn hamiltonian_extra_term(&self) -> Result<OperatorFieldExpr<T>> {
        let k = &self.constants;
        let factor = C::new(T::zero(), k.hbar * k.c);
        let term = self.s.derivative(0)?.mul(&self.s_inv)?.scale(factor);
        Ok(term.claim_symmetry(Symmetry::Hermitian))
    }
}

/// First-kind derivative `D_mu f = d_mu f + i kappa A_mu f` (left action).
pub fn covariant_derivative_first<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
    f: &OperatorFieldExpr<T>,
    mu: usize,
) -> Result<OperatorFieldExpr<T>> {
    let gauge = a.component(mu).mul(f)?.scale(im(constants.kappa()));
    f.derivative(mu)?.add(&gauge)
}

/// Second-kind derivative `Dcal_mu g = d_mu g + i kappa [A_mu, g]`
/// (adjoint action); maps Hermitian fields to Hermitian fields.
pub fn covariant_derivative_second<T: Real>(
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
    g: &OperatorFieldExpr<T>,
    mu: usize,
) -> Result<OperatorFieldExpr<T>> {
    let gauge = a.component(mu).commutator(g)?.scale(im(constants.kappa()));
    g.derivative(mu)?.add(&gauge)
}

/// Covariance of the first-kind derivative as the operator identity
/// `D'_mu compose S = S compose D_mu`: the pair compares
/// `D'_mu(S f S^-1)` against `S . D_mu(f S^-1)`.
pub fn first_derivative_covariance<T: Real>(
    a: &GaugePotential<T>,
    gt: &GaugeTransformation<T>,
    f: &OperatorFieldExpr<T>,
    mu: usize,
) -> Result<ExprPair<T>> {
    let a_prime = gt.transform_potential(a)?;
    let transformed_f = gt.conjugate(f)?;
    let lhs = covariant_derivative_first(&a_prime, gt.constants(), &transformed_f, mu)?;
    let f_s_inv = f.mul(gt.inverse_operator())?;
    let rhs = gt.operator().mul(&covariant_derivative_first(
        a,
        gt.constants(),
        &f_s_inv,
        mu,
    )?)?;
    Ok(ExprPair::new(lhs, rhs))
}

/// Covariance of the second-kind derivative on observables:
/// `Dcal'_mu(S G S^-1) = S (Dcal_mu G) S^-1`.
pub fn second_derivative_covariance<T: Real>(
    a: &GaugePotential<T>,
    gt: &GaugeTransformation<T>,
    g: &OperatorFieldExpr<T>,
    mu: usize,
) -> Result<ExprPair<T>> {
    let a_prime = gt.transform_potential(a)?;
    let lhs = covariant_derivative_second(&a_prime, gt.constants(), &gt.conjugate(g)?, mu)?;
    let rhs = gt.conjugate(&covariant_derivative_second(a, gt.constants(), g, mu)?)?;
    Ok(ExprPair::new(lhs, rhs))
}

/// The energy operator `E = H - q phi`.
pub fn energy_operator<T: Real>(
    h: &OperatorFieldExpr<T>,
    a: &GaugePotential<T>,
    constants: &PhysicalConstants<T>,
) -> Result<OperatorFieldExpr<T>> {
    h.sub(&a.scalar_potential().scale(re(constants.q)))
}

/// Energy covariance `E' = S E S^-1`: the Hamiltonian's derivative shift and
/// the scalar potential's cancel exactly. The pair compares
/// `H' - q phi'` against `S (H - q phi) S^-1`.
pub fn energy_covariance<T: Real>(
    h: &OperatorFieldExpr<T>,
    a: &GaugePotential<T>,
    gt: &GaugeTransformation<T>,
) -> Result<ExprPair<T>> {
    let a_prime = gt.transform_potential(a)?;
    let lhs = energy_operator(&gt.transform_hamiltonian(h)?, &a_prime, gt.constants())?;
    let rhs = gt.conjugate(&energy_operator(h, a, gt.constants())?)?;
    Ok(ExprPair::new(lhs, rhs))
}

/// The Abelian reduction `A'_mu = A_mu + d_mu L`, valid when all
/// coefficients commute. The pair compares the transformed component with
/// the shifted one.
pub fn abelian_reduction<T: Real>(
    a: &GaugePotential<T>,
    gt: &GaugeTransformation<T>,
    mu: usize,
) -> Result<ExprPair<T>> {
    let a_prime = gt.transform_potential(a)?;
    let lhs = a_prime.component(mu).clone();
    let rhs = a
        .component(mu)
        .add(&gt.generator().expr().derivative(mu)?)?;
    Ok(ExprPair::new(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AnalyticOperatorField, AnalyticScalar};
    use crate::matrix::{commutator, expectation, random_hermitian, OperatorMatrix};
    use crate::residual::Residual;

    type E = OperatorFieldExpr<f64>;

    fn natural() -> PhysicalConstants<f64> {
        PhysicalConstants::natural()
    }

    fn probe() -> SpacetimePoint<f64> {
        SpacetimePoint::new([0.21, -0.43, 0.58, -0.11])
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

    /// Polynomial + wave Hermitian field.
    fn hermitian_field(dim: usize, seed: u64) -> E {
        let mut f = AnalyticOperatorField::term(
            random_hermitian::<f64>(dim, seed, 0.9),
            AnalyticScalar::monomial(0.6, [1, 1, 0, 0]),
        );
        f.push_term(
            random_hermitian::<f64>(dim, seed + 500, 0.7),
            AnalyticScalar::cosine(0.8, [0.3, 0.7, -0.4, 0.5], 0.1),
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

    fn random_transformation(dim: usize, seed: u64) -> GaugeTransformation<f64> {
        let lambda = hermitian_field(dim, seed);
        GaugeTransformation::new(GaugeGenerator::new(lambda).unwrap(), natural()).unwrap()
    }

    #[test]
    fn generator_requires_hermitian_class() {
        let anti = hermitian_field(2, 1).scale(im(1.0));
        assert!(matches!(
            GaugeGenerator::new(anti),
            Err(Error::SymmetryDefect { .. })
        ));
        assert!(GaugeGenerator::new(hermitian_field(2, 1)).is_ok());
    }

    #[test]
    fn zero_coupling_is_rejected() {
        let constants = PhysicalConstants::new(0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let g = GaugeGenerator::new(hermitian_field(2, 2)).unwrap();
        assert!(matches!(
            GaugeTransformation::new(g, constants),
            Err(Error::ZeroCoupling)
        ));
    }

    #[test]
    fn transformation_operator_is_unitary_and_invertible() {
        let gt = random_transformation(3, 3);
        assert!(gt.operator().is_unitary());
        let x = probe();
        let s = gt.operator().eval(&x).unwrap();
        assert!(s.unitarity_defect() <= 1e-12);
        let prod = s.mul(&gt.inverse_operator().eval(&x).unwrap());
        let defect = prod.sub(&OperatorMatrix::identity(3)).frobenius_norm();
        assert!(defect <= 1e-12);
    }

    #[test]
    fn constant_generator_transforms_by_conjugation_alone() {
        let lambda = E::constant(random_hermitian::<f64>(2, 4, 1.0));
        let gt = GaugeTransformation::new(GaugeGenerator::new(lambda).unwrap(), natural()).unwrap();
        let a = random_potential(2, 5);
        let a_prime = gt.transform_potential(&a).unwrap();
        let x = probe();
        for mu in 0..4 {
            let direct = gt.conjugate(a.component(mu)).unwrap().eval(&x).unwrap();
            let got = a_prime.component(mu).eval(&x).unwrap();
            assert!(Residual::between(&got, &direct).within(1e-13), "mu={mu}");
        }
    }

    #[test]
    fn transformed_zero_potential_is_the_pure_gauge_term() {
        let gt = random_transformation(2, 6);
        let a_prime = gt.transform_potential(&GaugePotential::zero(2)).unwrap();
        let x = probe();
        for mu in 0..4 {
            let got = a_prime.component(mu).eval(&x).unwrap();
            let term = gt.pure_gauge_term(mu).unwrap().eval(&x).unwrap();
            assert!(Residual::between(&got, &term).within(1e-13), "mu={mu}");
            // and it is genuinely Hermitian
            assert!(got.hermiticity_defect() <= 1e-12);
        }
    }

    #[test]
    fn abelian_case_reduces_to_additive_shift() {
        // Identity-proportional coefficients: A' = A + dL.
        let dim = 2;
        let id = OperatorMatrix::identity(dim);
        let a = GaugePotential::new(std::array::from_fn(|mu| {
            E::leaf(AnalyticOperatorField::term(
                id.scale(re(0.4 + 0.2 * mu as f64)),
                AnalyticScalar::monomial(1.0, [0, 2, 0, 0]),
            ))
        }))
        .unwrap();
        let lambda = E::leaf(AnalyticOperatorField::term(
            id.scale(re(0.9)),
            AnalyticScalar::sine(1.2, [0.5, -0.3, 0.2, 0.8], 0.25),
        ));
        let gt = GaugeTransformation::new(GaugeGenerator::new(lambda).unwrap(), natural()).unwrap();
        let x = probe();
        for mu in 0..4 {
            let r = abelian_reduction(&a, &gt, mu)
                .unwrap()
                .residual_at(&x)
                .unwrap();
            assert!(r.within(1e-11), "mu={mu}: {:.3e}", r.relative());
        }
    }

    #[test]
    fn round_trip_recovers_the_potential() {
        let gt = random_transformation(2, 7);
        let a = random_potential(2, 8);
        let back = gt
            .inverse()
            .transform_potential(&gt.transform_potential(&a).unwrap())
            .unwrap();
        let x = probe();
        for mu in 0..4 {
            let r = Residual::between(
                &back.component(mu).eval(&x).unwrap(),
                &a.component(mu).eval(&x).unwrap(),
            );
            assert!(r.within(1e-10), "mu={mu}: {:.3e}", r.relative());
        }
    }

    #[test]
    fn observable_identity_is_fixed_and_expectation_invariant() {
        let gt = random_transformation(3, 9);
        let x = probe();
        let id = E::constant(OperatorMatrix::identity(3));
        let id_t = gt.transform_observable(&id).unwrap().eval(&x).unwrap();
        assert!(Residual::between(&id_t, &OperatorMatrix::identity(3)).within(1e-12));

        let g = hermitian_field(3, 10);
        let g_t = gt.transform_observable(&g).unwrap();
        assert_eq!(g_t.symmetry(), Symmetry::Hermitian);
        let mut psi = vec![re(0.5), C::new(0.5, -0.5), im(0.5)];
        let n = state_norm(&psi);
        for z in psi.iter_mut() {
            *z /= re(n);
        }
        let psi_t = gt.transform_state(&psi, &x).unwrap();
        let before = expectation(&g.eval(&x).unwrap(), &psi).unwrap();
        let after = expectation(&g_t.eval(&x).unwrap(), &psi_t).unwrap();
        assert!((before - after).norm() <= 1e-11);
    }

    #[test]
    fn state_transformation_matches_closed_form_and_preserves_norm() {
        // L = (pi / 2 kappa) sigma_x constant: S = exp(-i pi sigma_x / 2) = -i sigma_x,
        // so (1, 0) maps to (0, -i).
        let k = natural();
        let theta = std::f64::consts::FRAC_PI_2;
        let lambda = E::constant(sigma_x().scale(re(theta / k.kappa())));
        let gt = GaugeTransformation::new(GaugeGenerator::new(lambda).unwrap(), k).unwrap();
        let psi = vec![re(1.0), re(0.0)];
        let out = gt.transform_state(&psi, &probe()).unwrap();
        assert!((out[0] - re(0.0)).norm() <= 1e-13);
        assert!((out[1] - im(-1.0)).norm() <= 1e-13);
        assert!((state_norm(&out) - 1.0).abs() <= 1e-11);

        // L = 0 leaves the state untouched.
        let gt0 =
            GaugeTransformation::new(GaugeGenerator::new(E::zero(2)).unwrap(), natural()).unwrap();
        let same = gt0.transform_state(&psi, &probe()).unwrap();
        assert_eq!(same, psi);

        // Unnormalized input is a precondition violation.
        let bad = vec![re(2.0), re(0.0)];
        assert!(matches!(
            gt.transform_state(&bad, &probe()),
            Err(Error::StateNotNormalized { .. })
        ));
    }

    #[test]
    fn first_derivative_examples() {
        let k = natural();
        // A = 0: D_mu f = d_mu f.
        let f = hermitian_field(2, 11);
        let x = probe();
        let zero_a = GaugePotential::zero(2);
        for mu in 0..4 {
            let d = covariant_derivative_first(&zero_a, &k, &f, mu).unwrap();
            let r = Residual::between(
                &d.eval(&x).unwrap(),
                &f.derivative(mu).unwrap().eval(&x).unwrap(),
            );
            assert!(r.within(1e-14));
        }
        // Constant A_mu = a sigma_x, f = b sigma_y: D f = i kappa a b sigma_x sigma_y
        // = -kappa a b sigma_z.
        let (a_c, b_c) = (0.7, -1.3);
        let a = GaugePotential::new(std::array::from_fn(|_| {
            E::constant(sigma_x().scale(re(a_c)))
        }))
        .unwrap();
        let fb = E::constant(sigma_y().scale(re(b_c)));
        let d = covariant_derivative_first(&a, &k, &fb, 2).unwrap();
        let expected = sigma_z().scale(re(-k.kappa() * a_c * b_c));
        assert!(Residual::between(&d.eval(&x).unwrap(), &expected).within(1e-14));
    }

    #[test]
    fn second_derivative_examples() {
        let k = natural();
        let x = probe();
        // g = identity: both terms vanish.
        let a = random_potential(2, 12);
        let id = E::constant(OperatorMatrix::identity(2));
        for mu in 0..4 {
            let d = covariant_derivative_second(&a, &k, &id, mu).unwrap();
            assert!(d.eval(&x).unwrap().frobenius_norm() <= 1e-14);
        }
        // Constant A_mu = a sigma_x, g = b sigma_y: i kappa a b [sx, sy] = -2 kappa a b sz.
        let (a_c, b_c) = (0.9, 0.4);
        let ap = GaugePotential::new(std::array::from_fn(|_| {
            E::constant(sigma_x().scale(re(a_c)))
        }))
        .unwrap();
        let g = E::constant(sigma_y().scale(re(b_c)));
        let d = covariant_derivative_second(&ap, &k, &g, 1).unwrap();
        let expected = sigma_z().scale(re(-2.0 * k.kappa() * a_c * b_c));
        assert!(Residual::between(&d.eval(&x).unwrap(), &expected).within(1e-14));
        // Hermitian in, Hermitian out.
        assert_eq!(
            covariant_derivative_second(&ap, &k, &hermitian_field(2, 13), 0)
                .unwrap()
                .symmetry(),
            Symmetry::Hermitian
        );
    }

    #[test]
    fn first_derivative_covariance_holds() {
        let a = random_potential(2, 14);
        let gt = random_transformation(2, 15);
        let f = hermitian_field(2, 16);
        let x = probe();
        for mu in 0..4 {
            let r = first_derivative_covariance(&a, &gt, &f, mu)
                .unwrap()
                .residual_at(&x)
                .unwrap();
            assert!(r.within(1e-10), "mu={mu}: {:.3e}", r.relative());
        }
    }

    #[test]
    fn first_derivative_covariance_vanishes_for_trivial_generator() {
        let a = random_potential(2, 17);
        let gt =
            GaugeTransformation::new(GaugeGenerator::new(E::zero(2)).unwrap(), natural()).unwrap();
        let f = hermitian_field(2, 18);
        let r = first_derivative_covariance(&a, &gt, &f, 1)
            .unwrap()
            .residual_at(&probe())
            .unwrap();
        assert!(r.relative() <= 1e-13);
    }

    #[test]
    fn second_derivative_covariance_holds() {
        let a = random_potential(2, 19);
        let gt = random_transformation(2, 20);
        let g = hermitian_field(2, 21);
        let x = probe();
        for mu in 0..4 {
            let r = second_derivative_covariance(&a, &gt, &g, mu)
                .unwrap()
                .residual_at(&x)
                .unwrap();
            assert!(r.within(1e-10), "mu={mu}: {:.3e}", r.relative());
        }
    }

    #[test]
    fn hamiltonian_gains_a_shift_only_for_time_dependent_generators() {
        let h = hermitian_field(2, 22);
        let x = probe();

        // Time-independent generator: H' = S H S^-1.
        let static_lambda = E::leaf(AnalyticOperatorField::term(
            random_hermitian::<f64>(2, 23, 1.0),
            AnalyticScalar::monomial(0.8, [0, 2, 1, 0]),
        ));
        let gt_static =
            GaugeTransformation::new(GaugeGenerator::new(static_lambda).unwrap(), natural())
                .unwrap();
        let r = Residual::between(
            &gt_static
                .transform_hamiltonian(&h)
                .unwrap()
                .eval(&x)
                .unwrap(),
            &gt_static.conjugate(&h).unwrap().eval(&x).unwrap(),
        );
        assert!(r.within(1e-13));

        // Time-dependent generator: the shift is present and Hermitian.
        let gt = random_transformation(2, 24);
        let shift = gt.hamiltonian_extra_term().unwrap().eval(&x).unwrap();
        assert!(shift.frobenius_norm() > 1e-3);
        assert!(shift.hermiticity_defect() <= 1e-12);
        let h_prime = gt.transform_hamiltonian(&h).unwrap().eval(&x).unwrap();
        let conjugated = gt.conjugate(&h).unwrap().eval(&x).unwrap();
        assert!(
            h_prime.sub(&conjugated).frobenius_norm() > 1e-3,
            "raw Hamiltonian must be gauge dependent here"
        );
    }

    #[test]
    fn energy_operator_conjugates_cleanly() {
        let h = hermitian_field(2, 25);
        let a = random_potential(2, 26);
        let gt = random_transformation(2, 27);
        let r = energy_covariance(&h, &a, &gt)
            .unwrap()
            .residual_at(&probe())
            .unwrap();
        assert!(r.within(1e-10), "{:.3e}", r.relative());
    }

    #[test]
    fn noncommutativity_witness() {
        // Generic sigma_x / sigma_y configuration: [A_mu, L] != 0.
        let a = GaugePotential::new(std::array::from_fn(|_| {
            E::constant(sigma_x().scale(re(1.0)))
        }))
        .unwrap();
        let lambda = E::constant(sigma_y());
        let x = probe();
        let c = commutator(&a.component(0).eval(&x).unwrap(), &lambda.eval(&x).unwrap()).unwrap();
        assert!(c.frobenius_norm() > 1.0);
    }

    #[test]
    fn group_property_for_commuting_generators() {
        // Two generators built on the same matrix commute pointwise:
        // S(L1) S(L2) = S(L1 + L2) exactly.
        let m = random_hermitian::<f64>(2, 28, 1.0);
        let l1 = E::leaf(AnalyticOperatorField::term(
            m.clone(),
            AnalyticScalar::monomial(0.7, [1, 0, 0, 1]),
        ));
        let l2 = E::leaf(AnalyticOperatorField::term(
            m,
            AnalyticScalar::sine(0.5, [0.2, 0.9, 0.0, -0.3], 0.6),
        ));
        let k = natural();
        let gt1 = GaugeTransformation::new(GaugeGenerator::new(l1.clone()).unwrap(), k).unwrap();
        let gt2 = GaugeTransformation::new(GaugeGenerator::new(l2.clone()).unwrap(), k).unwrap();
        let gt12 = GaugeTransformation::new(GaugeGenerator::new(l1.add(&l2).unwrap()).unwrap(), k)
            .unwrap();
        let x = probe();
        let lhs = gt1
            .operator()
            .eval(&x)
            .unwrap()
            .mul(&gt2.operator().eval(&x).unwrap());
        let rhs = gt12.operator().eval(&x).unwrap();
        assert!(Residual::between(&lhs, &rhs).within(1e-13));
    }
}
