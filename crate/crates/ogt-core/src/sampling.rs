//! Deterministic low-discrepancy sampling of spacetime boxes.
//!
//! Verification checks are evaluated at a finite set of points; a Halton
//! sequence covers the box far more evenly than pseudo-random draws at the
//! small counts used here, while staying fully reproducible. A seeded
//! Cranley–Patterson rotation (a per-axis fractional shift) decorrelates
//! different seeds without disturbing the low-discrepancy structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::SpacetimePoint;
use crate::scalar::Real;

/// Sample count used by the verification suites unless a scenario says
/// otherwise.
pub const DEFAULT_SAMPLE_COUNT: usize = 32;

/// The first four primes, one Halton base per spacetime axis.
pub const HALTON_BASES: [usize; 4] = [2, 3, 5, 7];

/// Radical-inverse (van der Corput) value of `index` in the given base,
/// in `[0, 1)`.
pub fn radical_inverse(mut index: usize, base: usize) -> f64 {
    debug_assert!(base >= 2);
    let inv_base = 1.0 / base as f64;
    let mut factor = inv_base;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * factor;
        index /= base;
        factor *= inv_base;
    }
    value
}

/// `count` Halton points in the box `[0, extent_mu)^4`, shifted by a
/// seeded per-axis rotation. Identical `(extent, count, seed)` triples
/// give identical points.
pub fn sample_box<T: Real>(extent: &[T; 4], count: usize, seed: u64) -> Vec<SpacetimePoint<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
    (0..count)
        .map(|i| {
            SpacetimePoint::new(std::array::from_fn(|mu| {
                // Skip index 0 (the all-zeros point) for better uniformity.
                let u = (radical_inverse(i + 1, HALTON_BASES[mu]) + shifts[mu]).fract();
                extent[mu] * T::from_f64(u).expect("unit-interval value fits")
            }))
        })
        .collect()
}

/// [`sample_box`] over the unit box.
pub fn unit_box_samples<T: Real>(count: usize, seed: u64) -> Vec<SpacetimePoint<T>> {
    sample_box(&[T::one(); 4], count, seed)
}
