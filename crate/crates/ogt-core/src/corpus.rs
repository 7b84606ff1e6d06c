//! Seeded builders for the verification corpus: potentials, generators,
//! observables, and states with reproducible pseudo-random content.
//!
//! Every builder is a pure function of `(dim, seed)`, so a corpus of any
//! size is pinned by a list of seeds. Field amplitudes are kept at order
//! one so that exponentials, inverses, and conjugations stay comfortably
//! inside the conditioning guards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::PhysicalConstants;
use crate::field::{AnalyticOperatorField, AnalyticScalar, OperatorFieldExpr, WaveKind};
use crate::gauge::{GaugeGenerator, GaugePotential, GaugeTransformation};
use crate::matrix::{random_hermitian, state_norm, OperatorMatrix};
use crate::scalar::{im, re, Real, C};

/// Matrix dimensions the acceptance corpus cycles through.
pub const CORPUS_DIMS: [usize; 3] = [2, 4, 8];

/// Dimension assigned to a corpus seed: cycles through [`CORPUS_DIMS`].
pub fn corpus_dim(seed: u64) -> usize {
    CORPUS_DIMS[(seed % CORPUS_DIMS.len() as u64) as usize]
}

/// Derives an independent stream from a base seed and a role tag.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer over the combined value.
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(tag.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// First Pauli matrix.
pub fn pauli_x<T: Real>() -> OperatorMatrix<T> {
    OperatorMatrix::from_fn(2, |i, j| if i != j { re(T::one()) } else { re(T::zero()) })
}

/// Second Pauli matrix.
pub fn pauli_y<T: Real>() -> OperatorMatrix<T> {
    let mut m = OperatorMatrix::zeros(2);
    m.set(0, 1, im(-T::one()));
    m.set(1, 0, im(T::one()));
    m
}

/// Third Pauli matrix.
pub fn pauli_z<T: Real>() -> OperatorMatrix<T> {
    OperatorMatrix::from_diag(&[re(T::one()), re(-T::one())])
}

fn uniform<T: Real>(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> T {
    T::from_f64(rng.gen_range(lo..hi)).expect("range value fits")
}

fn random_wave<T: Real>(rng: &mut ChaCha8Rng) -> AnalyticScalar<T> {
    let amplitude = uniform(rng, 0.3, 0.9);
    let wavevector = std::array::from_fn(|_| uniform(rng, -0.8, 0.8));
    let phase = uniform(rng, 0.0, std::f64::consts::TAU);
    let kind = if rng.gen::<bool>() {
        WaveKind::Cos
    } else {
        WaveKind::Sin
    };
    match kind {
        WaveKind::Cos => AnalyticScalar::cosine(amplitude, wavevector, phase),
        WaveKind::Sin => AnalyticScalar::sine(amplitude, wavevector, phase),
    }
}

fn random_low_monomial<T: Real>(rng: &mut ChaCha8Rng) -> AnalyticScalar<T> {
    let coeff = uniform(rng, -0.4, 0.4);
    let mut powers = [0u32; 4];
    if rng.gen::<bool>() {
        powers[rng.gen_range(0..4)] = 2;
    } else {
        powers[rng.gen_range(0..4)] = 1;
        powers[rng.gen_range(0..4)] += 1;
    }
    AnalyticScalar::monomial(coeff, powers)
}

/// Smooth Hermitian operator field with one trig and one polynomial term.
pub fn random_field<T: Real>(dim: usize, seed: u64) -> OperatorFieldExpr<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 0xF1E1D));
    let mut f = AnalyticOperatorField::term(
        random_hermitian(
            dim,
            sub_seed(seed, 1),
            T::from_f64(0.7).expect("scale fits"),
        ),
        random_wave(&mut rng),
    );
    f.push_term(
        random_hermitian(
            dim,
            sub_seed(seed, 2),
            T::from_f64(0.4).expect("scale fits"),
        ),
        random_low_monomial(&mut rng),
    )
    .expect("coefficients share the dimension");
    OperatorFieldExpr::leaf(f)
}

/// Hermitian operator field that is periodic on `[0, extent)^4`: every
/// wavevector component completes a whole number of cycles across the box.
pub fn random_trig_field<T: Real>(dim: usize, seed: u64, extent: T) -> OperatorFieldExpr<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 0x7816));
    let tau = T::from_f64(std::f64::consts::TAU).expect("tau fits");
    let wave = |rng: &mut ChaCha8Rng| {
        let amplitude = uniform::<T>(rng, 0.3, 0.8);
        let wavevector: [T; 4] = std::array::from_fn(|_| {
            let cycles = T::from_i32(rng.gen_range(-2..=2)).expect("small int fits");
            tau * cycles / extent
        });
        let phase = uniform(rng, 0.0, std::f64::consts::TAU);
        if rng.gen::<bool>() {
            AnalyticScalar::cosine(amplitude, wavevector, phase)
        } else {
            AnalyticScalar::sine(amplitude, wavevector, phase)
        }
    };
    let mut f = AnalyticOperatorField::term(
        random_hermitian(
            dim,
            sub_seed(seed, 3),
            T::from_f64(0.7).expect("scale fits"),
        ),
        wave(&mut rng),
    );
    f.push_term(
        random_hermitian(
            dim,
            sub_seed(seed, 4),
            T::from_f64(0.4).expect("scale fits"),
        ),
        wave(&mut rng),
    )
    .expect("coefficients share the dimension");
    OperatorFieldExpr::leaf(f)
}

/// Generic non-Abelian potential: four independent [`random_field`]s.
pub fn random_potential<T: Real>(dim: usize, seed: u64) -> GaugePotential<T> {
    GaugePotential::new(std::array::from_fn(|mu| {
        random_field(dim, sub_seed(seed, 10 + mu as u64))
    }))
    .expect("components share dimension and are Hermitian")
}

/// Non-Abelian potential built from trig bases only, usable on the
/// lattice.
pub fn random_trig_potential<T: Real>(dim: usize, seed: u64, extent: T) -> GaugePotential<T> {
    GaugePotential::new(std::array::from_fn(|mu| {
        random_trig_field(dim, sub_seed(seed, 20 + mu as u64), extent)
    }))
    .expect("components share dimension and are Hermitian")
}

/// Identity-proportional potential: scalar fields times the identity, so
/// every commutator vanishes.
pub fn abelian_potential<T: Real>(dim: usize, seed: u64) -> GaugePotential<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 0xAB));
    let id = OperatorMatrix::identity(dim);
    GaugePotential::new(std::array::from_fn(|_| {
        let mut f = AnalyticOperatorField::term(id.clone(), random_wave(&mut rng));
        f.push_term(id.clone(), random_low_monomial(&mut rng))
            .expect("same dimension");
        OperatorFieldExpr::leaf(f)
    }))
    .expect("identity coefficients are Hermitian")
}

/// Commuting single-matrix family: all four components are scalar fields
/// times one shared Hermitian matrix — commutative without being
/// identity-proportional.
pub fn commuting_potential<T: Real>(dim: usize, seed: u64) -> GaugePotential<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 0xC0));
    let shared = random_hermitian(dim, sub_seed(seed, 5), T::one());
    GaugePotential::new(std::array::from_fn(|_| {
        let mut f = AnalyticOperatorField::term(shared.clone(), random_wave(&mut rng));
        f.push_term(shared.clone(), random_low_monomial(&mut rng))
            .expect("same dimension");
        OperatorFieldExpr::leaf(f)
    }))
    .expect("shared coefficient is Hermitian")
}

/// Hermitian gauge-function generator.
pub fn random_generator<T: Real>(dim: usize, seed: u64) -> GaugeGenerator<T> {
    GaugeGenerator::new(random_field(dim, sub_seed(seed, 30))).expect("random fields are Hermitian")
}

/// Identity-proportional generator: a random scalar field times the
/// identity, so the transformation it drives commutes with everything.
pub fn abelian_generator<T: Real>(dim: usize, seed: u64) -> GaugeGenerator<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 0xAB6));
    let id = OperatorMatrix::identity(dim);
    let mut f = AnalyticOperatorField::term(id.clone(), random_wave(&mut rng));
    f.push_term(id, random_low_monomial(&mut rng))
        .expect("same dimension");
    GaugeGenerator::new(OperatorFieldExpr::leaf(f)).expect("identity fields are Hermitian")
}

/// Gauge transformation driven by a random generator.
pub fn random_transformation<T: Real>(
    dim: usize,
    seed: u64,
    constants: &PhysicalConstants<T>,
) -> GaugeTransformation<T> {
    GaugeTransformation::new(random_generator(dim, seed), *constants).expect("nonzero coupling")
}

/// Hermitian observable field.
pub fn random_observable<T: Real>(dim: usize, seed: u64) -> OperatorFieldExpr<T> {
    random_field(dim, sub_seed(seed, 40))
}

/// Normalized random state vector.
pub fn random_state<T: Real>(dim: usize, seed: u64) -> Vec<C<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 50));
    let mut v: Vec<C<T>> = (0..dim)
        .map(|_| C::new(uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)))
        .collect();
    let norm = state_norm(&v);
    for z in &mut v {
        *z /= norm;
    }
    v
}
