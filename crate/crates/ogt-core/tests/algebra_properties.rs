//! Randomized structural properties of the matrix kernel and the exact
//! derivative engine, checked against independent routes (finite
//! differences, algebraic identities) rather than against the code's own
//! definitions.

use ogt_core::corpus::{self, sub_seed};
use ogt_core::field::central_difference;
use ogt_core::matrix::{commutator, conjugate, random_hermitian};
use ogt_core::scalar::im;
use ogt_core::{OperatorFieldExpr, SpacetimePoint};
use proptest::prelude::*;

fn arb_dim() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2), Just(3), Just(4)]
}

fn arb_point() -> impl Strategy<Value = SpacetimePoint<f64>> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(SpacetimePoint::new)
}

/// A small zoo of expression shapes: leaf, product, commutator, and an
/// exponential node, all built from seeded corpus fields.
fn build_tree(shape: usize, dim: usize, seed: u64) -> OperatorFieldExpr<f64> {
    let f = corpus::random_field::<f64>(dim, sub_seed(seed, 101));
    let g = corpus::random_field::<f64>(dim, sub_seed(seed, 102));
    match shape {
        0 => f,
        1 => f.mul(&g).expect("shared dimension"),
        2 => f.commutator(&g).expect("shared dimension"),
        3 => f.scale(im(0.4)).exp(),
        _ => {
            let inner = f.commutator(&g).expect("shared dimension");
            inner
                .scale(im(0.3))
                .exp()
                .mul(&g)
                .expect("shared dimension")
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn commutators_satisfy_the_jacobi_identity(seed in any::<u64>(), dim in arb_dim()) {
        let a = random_hermitian::<f64>(dim, sub_seed(seed, 1), 1.0);
        let b = random_hermitian::<f64>(dim, sub_seed(seed, 2), 1.0);
        let c = random_hermitian::<f64>(dim, sub_seed(seed, 3), 1.0);
        let j = commutator(&commutator(&a, &b).unwrap(), &c)
            .unwrap()
            .add(&commutator(&commutator(&b, &c).unwrap(), &a).unwrap())
            .add(&commutator(&commutator(&c, &a).unwrap(), &b).unwrap());
        let scale = 1.0 + a.frobenius_norm() * b.frobenius_norm() * c.frobenius_norm();
        prop_assert!(j.frobenius_norm() <= 1e-12 * scale);
    }

    #[test]
    fn conjugation_preserves_commutators(seed in any::<u64>(), dim in arb_dim()) {
        let h = random_hermitian::<f64>(dim, sub_seed(seed, 4), 1.0);
        let w = h.scale(im(1.0)).matrix_exp().unwrap();
        let a = random_hermitian::<f64>(dim, sub_seed(seed, 5), 1.0);
        let b = random_hermitian::<f64>(dim, sub_seed(seed, 6), 1.0);
        let lhs = conjugate(&w, &commutator(&a, &b).unwrap()).unwrap();
        let rhs = commutator(&conjugate(&w, &a).unwrap(), &conjugate(&w, &b).unwrap()).unwrap();
        let scale = 1.0 + lhs.frobenius_norm();
        prop_assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-11 * scale);
    }

    #[test]
    fn shared_generator_exponentials_compose(
        seed in any::<u64>(),
        dim in arb_dim(),
        s in -1.0f64..1.0,
        t in -1.0f64..1.0,
    ) {
        let h = random_hermitian::<f64>(dim, sub_seed(seed, 7), 1.0);
        let joint = h.scale(im(s + t)).matrix_exp().unwrap();
        let split = h
            .scale(im(s))
            .matrix_exp()
            .unwrap()
            .mul(&h.scale(im(t)).matrix_exp().unwrap());
        let scale = 1.0 + joint.frobenius_norm();
        prop_assert!(joint.sub(&split).frobenius_norm() <= 1e-12 * scale);
    }

    #[test]
    fn exact_derivatives_match_finite_differences(
        seed in any::<u64>(),
        dim in arb_dim(),
        shape in 0usize..5,
        mu in 0usize..4,
        x in arb_point(),
    ) {
        let expr = build_tree(shape, dim, seed);
        let exact = expr.derivative(mu).unwrap().eval(&x).unwrap();
        let stencil = central_difference(&expr, mu, &x, 0.05).unwrap();
        let scale = 1.0 + exact.frobenius_norm();
        prop_assert!(
            exact.sub(&stencil).frobenius_norm() <= 1e-6 * scale,
            "shape {} mu {}: {:.3e}",
            shape,
            mu,
            exact.sub(&stencil).frobenius_norm() / scale,
        );
    }

    #[test]
    fn mixed_partials_commute(
        seed in any::<u64>(),
        dim in arb_dim(),
        shape in 0usize..5,
        mu in 0usize..4,
        nu in 0usize..4,
        x in arb_point(),
    ) {
        let expr = build_tree(shape, dim, seed);
        let ab = expr.derivative(mu).unwrap().derivative(nu).unwrap().eval(&x).unwrap();
        let ba = expr.derivative(nu).unwrap().derivative(mu).unwrap().eval(&x).unwrap();
        let scale = 1.0 + ab.frobenius_norm();
        prop_assert!(ab.sub(&ba).frobenius_norm() <= 1e-10 * scale);
    }

    #[test]
    fn exponential_derivative_matches_product_rule_on_squares(
        seed in any::<u64>(),
        dim in arb_dim(),
        mu in 0usize..4,
        x in arb_point(),
    ) {
        // d(exp(a)^2) computed two ways: through the product rule on
        // exp(a)*exp(a), and through exp(2a)'s own block derivative.
        let a = corpus::random_field::<f64>(dim, sub_seed(seed, 103)).scale(im(0.3));
        let square = a.exp().mul(&a.exp()).unwrap();
        let doubled = a.scale(ogt_core::scalar::re(2.0)).exp();
        let d1 = square.derivative(mu).unwrap().eval(&x).unwrap();
        let d2 = doubled.derivative(mu).unwrap().eval(&x).unwrap();
        let scale = 1.0 + d1.frobenius_norm();
        prop_assert!(d1.sub(&d2).frobenius_norm() <= 1e-11 * scale);
    }
}
