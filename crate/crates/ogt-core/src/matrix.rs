//! Dense complex operator matrices and the exponential kernel.
//!
//! Matrices are small (typical dimension 2..64) and stored row-major. The
//! exponential uses scaling-and-squaring with a degree-13 Pade approximant;
//! its directional derivative comes from the block identity
//! `exp([[m, e], [0, m]]) = [[exp(m), L(m, e)], [0, exp(m)]]`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::{re, real, Real, C};

/// Frobenius condition-number bound above which `conjugate` refuses to invert.
pub const CONJUGATION_CONDITION_BOUND: f64 = 1e8;

/// A square complex matrix acting as an operator on an n-dimensional
/// internal space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be at least 1");
        Self {
            dim,
            data: vec![C::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = re(T::one());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Builds from row-major entries; the length must be a perfect square.
    pub fn from_row_major(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_diag(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = *d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C<T>) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[C<T>] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(re(-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let n = self.dim;
        let mut out = Self::zeros(n);
        // i-k-j order keeps the inner loop contiguous in both operands.
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik.re == T::zero() && aik.im == T::zero() {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                let row_o = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    row_o[j] += aik * row_b[j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn matvec(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        if v.len() != self.dim {
            return Err(Error::StateLength {
                len: v.len(),
                dim: self.dim,
            });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                let mut acc = C::new(T::zero(), T::zero());
                for j in 0..n {
                    acc += self.data[i * n + j] * v[j];
                }
                acc
            })
            .collect())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> T {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).fold(T::zero(), |acc, i| acc + self.data[i * n + j].norm()))
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `||M - M^dag||_F`.
    pub fn hermiticity_defect(&self) -> T {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    /// `||M + M^dag||_F`.
    pub fn antihermiticity_defect(&self) -> T {
        self.add(&self.adjoint()).frobenius_norm()
    }

    /// `||M M^dag - I||_F`.
    pub fn unitarity_defect(&self) -> T {
        self.mul(&self.adjoint())
            .sub(&Self::identity(self.dim))
            .frobenius_norm()
    }

    /// Extracts the square sub-block of size `n` with top-left corner
    /// `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, n: usize) -> Self {
        assert!(
            r0 + n <= self.dim && c0 + n <= self.dim,
            "block out of range"
        );
        Self::from_fn(n, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Assembles `[[a, e], [0, a]]`.
    pub fn block2(a: &Self, e: &Self) -> Self {
        assert_eq!(a.dim, e.dim, "operator dimensions differ");
        let n = a.dim;
        let mut out = Self::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, a.get(i, j));
                out.set(n + i, n + j, a.get(i, j));
                out.set(i, n + j, e.get(i, j));
            }
        }
        out
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator<T: Real>(
    a: &OperatorMatrix<T>,
    b: &OperatorMatrix<T>,
) -> Result<OperatorMatrix<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

/// `s g s^-1` through a pivoted LU inverse.
///
/// Refused when the Frobenius condition estimate `||s|| * ||s^-1||` exceeds
/// [`CONJUGATION_CONDITION_BOUND`]. Gauge conjugation never takes this path
/// (there the inverse is an exponential by construction); this is the
/// general-matrix entry point.
pub fn conjugate<T: Real>(
    s: &OperatorMatrix<T>,
    g: &OperatorMatrix<T>,
) -> Result<OperatorMatrix<T>> {
    if s.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: s.dim(),
            right: g.dim(),
        });
    }
    let s_inv = Lu::decompose(s)?.inverse()?;
    let cond = s.frobenius_norm() * s_inv.frobenius_norm();
    let bound = real::<T>(CONJUGATION_CONDITION_BOUND);
    // A NaN condition estimate must land in the refusal branch.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(cond <= bound) {
        return Err(Error::IllConditioned {
            cond: cond.to_f64().unwrap_or(f64::INFINITY),
            bound: CONJUGATION_CONDITION_BOUND,
        });
    }
    Ok(s.mul(g).mul(&s_inv))
}

/// Seeded Hermitian matrix with entries of order `scale`.
///
/// The upper triangle is drawn from a complex normal distribution and the
/// lower triangle mirrors its conjugate, so the result is Hermitian exactly,
/// not merely to rounding. The stream is ChaCha8 keyed by `seed`: the same
/// seed reproduces the same matrix on every platform.
pub fn random_hermitian<T: Real>(dim: usize, seed: u64, scale: T) -> OperatorMatrix<T> {
    assert!(dim >= 1, "operator dimension must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = || {
        let v: f64 = StandardNormal.sample(&mut rng);
        real::<T>(v)
    };
    let inv_sqrt2 = real::<T>(std::f64::consts::FRAC_1_SQRT_2);
    let mut m = OperatorMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, re(scale * n()));
        for j in (i + 1)..dim {
            let z = C::new(scale * n() * inv_sqrt2, scale * n() * inv_sqrt2);
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// `1 + max ||input||_F`: the relative-residual scale used by every check.
pub fn residual_scale<T: Real>(inputs: &[&OperatorMatrix<T>]) -> T {
    T::one()
        + inputs
            .iter()
            .map(|m| m.frobenius_norm())
            .fold(T::zero(), T::max)
}

// ---------------------------------------------------------------------------
// LU decomposition with partial pivoting
// ---------------------------------------------------------------------------

pub(crate) struct Lu<T: Real> {
    dim: usize,
    lu: Vec<C<T>>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub(crate) fn decompose(m: &OperatorMatrix<T>) -> Result<Self> {
        let n = m.dim();
        let mut lu = m.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].norm();
            for i in (k + 1)..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() || !best.is_finite() {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let sub = f * lu[k * n + j];
                    lu[i * n + j] -= sub;
                }
            }
        }
        Ok(Self { dim: n, lu, perm })
    }

    /// Solves `A X = B` for all columns of `B`.
    pub(crate) fn solve(&self, b: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>> {
        if b.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: b.dim(),
            });
        }
        let n = self.dim;
        let mut x = OperatorMatrix::zeros(n);
        let mut col = vec![C::new(T::zero(), T::zero()); n];
        for c in 0..n {
            for i in 0..n {
                col[i] = b.get(self.perm[i], c);
            }
            // forward substitution (unit lower triangle)
            for i in 1..n {
                for j in 0..i {
                    let sub = self.lu[i * n + j] * col[j];
                    col[i] -= sub;
                }
            }
            // back substitution
            for i in (0..n).rev() {
                for j in (i + 1)..n {
                    let sub = self.lu[i * n + j] * col[j];
                    col[i] -= sub;
                }
                col[i] /= self.lu[i * n + i];
            }
            for i in 0..n {
                x.set(i, c, col[i]);
            }
        }
        Ok(x)
    }

    pub(crate) fn inverse(&self) -> Result<OperatorMatrix<T>> {
        self.solve(&OperatorMatrix::identity(self.dim))
    }
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

/// 1-norm thresholds for Pade degrees 3, 5, 7, 9, 13.
const PADE_THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

const PADE_B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const PADE_B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const PADE_B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest scaling exponent before the input is declared out of range.
const MAX_SQUARINGS: u32 = 64;

impl<T: Real> OperatorMatrix<T> {
    /// Matrix exponential by scaling-and-squaring with a Pade approximant.
    ///
    /// Accurate to ~1e-15 relative in f64 for well-scaled inputs; the
    /// published contract is 1e-13 relative. Inputs whose exponential leaves
    /// the floating-point range report [`Error::ExpOverflow`].
    pub fn matrix_exp(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let n1 = self.one_norm();
        let theta13 = real::<T>(PADE_THETA[4].1);

        let result = if n1 <= theta13 {
            let mut chosen = None;
            for &(deg, theta) in &PADE_THETA {
                if n1 <= real::<T>(theta) {
                    chosen = Some(deg);
                    break;
                }
            }
            self.pade(chosen.expect("norm below theta13 selects a degree"))?
        } else {
            let ratio = (n1 / theta13).to_f64().unwrap_or(f64::INFINITY);
            let s = ratio.log2().ceil() as i64;
            if s < 0 || s as u32 > MAX_SQUARINGS {
                return Err(Error::ExpOverflow {
                    norm: n1.to_f64().unwrap_or(f64::INFINITY),
                });
            }
            let s = s as u32;
            let half = re(real::<T>(0.5f64.powi(s as i32)));
            let mut e = self.scale(half).pade(13)?;
            for _ in 0..s {
                e = e.mul(&e);
            }
            e
        };

        if !result.is_finite() {
            return Err(Error::ExpOverflow {
                norm: n1.to_f64().unwrap_or(f64::INFINITY),
            });
        }
        Ok(result)
    }

    fn pade(&self, degree: usize) -> Result<Self> {
        let n = self.dim;
        let id = Self::identity(n);
        let a2 = self.mul(self);

        let (u, v) = if degree == 13 {
            let b: Vec<T> = PADE_B13.iter().map(|&c| real::<T>(c)).collect();
            let a4 = a2.mul(&a2);
            let a6 = a4.mul(&a2);
            let u_hi = a6
                .scale(re(b[13]))
                .add(&a4.scale(re(b[11])))
                .add(&a2.scale(re(b[9])));
            let u_lo = a6
                .scale(re(b[7]))
                .add(&a4.scale(re(b[5])))
                .add(&a2.scale(re(b[3])))
                .add(&id.scale(re(b[1])));
            let u = self.mul(&a6.mul(&u_hi).add(&u_lo));
            let v_hi = a6
                .scale(re(b[12]))
                .add(&a4.scale(re(b[10])))
                .add(&a2.scale(re(b[8])));
            let v = a6
                .mul(&v_hi)
                .add(&a6.scale(re(b[6])))
                .add(&a4.scale(re(b[4])))
                .add(&a2.scale(re(b[2])))
                .add(&id.scale(re(b[0])));
            (u, v)
        } else {
            let b: Vec<T> = match degree {
                3 => PADE_B3.iter().map(|&c| real::<T>(c)).collect(),
                5 => PADE_B5.iter().map(|&c| real::<T>(c)).collect(),
                7 => PADE_B7.iter().map(|&c| real::<T>(c)).collect(),
                9 => PADE_B9.iter().map(|&c| real::<T>(c)).collect(),
                _ => unreachable!("unsupported Pade degree"),
            };
            // even powers I, A^2, A^4, ...
            let mut powers = vec![id.clone()];
            for _ in 0..(degree / 2) {
                let next = powers.last().unwrap().mul(&a2);
                powers.push(next);
            }
            let mut u_poly = Self::zeros(n);
            let mut v = Self::zeros(n);
            for (k, p) in powers.iter().enumerate() {
                if 2 * k < degree {
                    u_poly = u_poly.add(&p.scale(re(b[2 * k + 1])));
                }
                v = v.add(&p.scale(re(b[2 * k])));
            }
            (self.mul(&u_poly), v)
        };

        let denom = v.sub(&u);
        let numer = v.add(&u);
        Lu::decompose(&denom)?.solve(&numer)
    }
}

/// `(exp(m), L(m, e))` where `L` is the directional derivative of the
/// exponential at `m` along `e`.
///
/// Both values are blocks of `exp([[m, e], [0, m]])`, so the pair satisfies
/// the block identity by construction and the diagonal block agrees with
/// `matrix_exp(m)` to rounding.
pub fn exp_frechet<T: Real>(
    m: &OperatorMatrix<T>,
    e: &OperatorMatrix<T>,
) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    if m.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: e.dim(),
        });
    }
    let n = m.dim();
    let big = OperatorMatrix::block2(m, e).matrix_exp()?;
    Ok((big.block(0, 0, n), big.block(0, n, n)))
}

// ---------------------------------------------------------------------------
// Small state-vector helpers
// ---------------------------------------------------------------------------

pub fn state_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// `<u|v>` with the conjugation on the left argument.
pub fn inner_product<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter()
        .zip(v)
        .fold(C::new(T::zero(), T::zero()), |acc, (a, b)| {
            acc + a.conj() * b
        })
}

/// `<u|M|u>`.
pub fn expectation<T: Real>(m: &OperatorMatrix<T>, u: &[C<T>]) -> Result<C<T>> {
    let mv = m.matvec(u)?;
    Ok(inner_product(u, &mv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::im;

    type M = OperatorMatrix<f64>;

    fn sigma_x() -> M {
        M::from_fn(2, |i, j| if i != j { re(1.0) } else { re(0.0) })
    }

    fn sigma_y() -> M {
        let mut m = M::zeros(2);
        m.set(0, 1, im(-1.0));
        m.set(1, 0, im(1.0));
        m
    }

    fn sigma_z() -> M {
        M::from_diag(&[re(1.0), re(-1.0)])
    }

    /// Independent exponential: scale down, raw Taylor series, square up.
    fn taylor_exp(m: &M) -> M {
        let mut s = 0u32;
        let mut norm = m.one_norm();
        while norm > 0.25 {
            norm /= 2.0;
            s += 1;
        }
        let a = m.scale(re(0.5f64.powi(s as i32)));
        let mut term = M::identity(m.dim());
        let mut sum = term.clone();
        for k in 1..60 {
            term = term.mul(&a).scale(re(1.0 / k as f64));
            sum = sum.add(&term);
            if term.frobenius_norm() < 1e-20 {
                break;
            }
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }

    fn assert_close(a: &M, b: &M, tol: f64) {
        let d = a.sub(b).frobenius_norm();
        assert!(d <= tol, "matrices differ by {d:.3e} > {tol:.3e}");
    }

    #[test]
    fn pauli_commutator_is_2i_sigma_z() {
        let c = commutator(&sigma_x(), &sigma_y()).unwrap();
        let expected = sigma_z().scale(im(2.0));
        assert_close(&c, &expected, 0.0);
    }

    #[test]
    fn commutator_with_identity_vanishes() {
        let h = random_hermitian::<f64>(4, 9, 1.0);
        let c = commutator(&h, &M::identity(4)).unwrap();
        assert_eq!(c.frobenius_norm(), 0.0);
    }

    #[test]
    fn commutator_of_diagonals_vanishes() {
        let a = M::from_diag(&[re(1.0), re(2.0), re(-0.5)]);
        let b = M::from_diag(&[im(3.0), re(0.25), C::new(1.0, -2.0)]);
        assert_eq!(commutator(&a, &b).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn commutator_rejects_dimension_mismatch() {
        let a = M::identity(2);
        let b = M::identity(3);
        assert!(matches!(
            commutator(&a, &b),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn conjugate_by_identity_is_identity_map() {
        let g = random_hermitian::<f64>(3, 4, 2.0);
        let out = conjugate(&M::identity(3), &g).unwrap();
        assert_close(&out, &g, 1e-14);
    }

    #[test]
    fn conjugate_of_zero_is_zero() {
        let s = random_hermitian::<f64>(3, 5, 1.0).add(&M::identity(3).scale(re(3.0)));
        let out = conjugate(&s, &M::zeros(3)).unwrap();
        assert!(out.frobenius_norm() <= 1e-14);
    }

    #[test]
    fn conjugate_rotates_sigma_x() {
        // exp(i theta sz) sx exp(-i theta sz) = cos(2 theta) sx - sin(2 theta) sy
        let theta = 0.4;
        let s = M::from_diag(&[C::from_polar(1.0, theta), C::from_polar(1.0, -theta)]);
        let out = conjugate(&s, &sigma_x()).unwrap();
        let expected = sigma_x()
            .scale(re((2.0 * theta).cos()))
            .sub(&sigma_y().scale(re((2.0 * theta).sin())));
        assert_close(&out, &expected, 1e-14);
    }

    #[test]
    fn conjugate_refuses_ill_conditioned_s() {
        let s = M::from_diag(&[re(1.0), re(1e-12)]);
        match conjugate(&s, &sigma_x()) {
            Err(Error::IllConditioned { cond, bound }) => {
                assert!(cond > bound);
            }
            other => panic!("expected conditioning refusal, got {other:?}"),
        }
    }

    #[test]
    fn exp_of_zero_is_identity_exactly() {
        let e = M::zeros(3).matrix_exp().unwrap();
        assert_eq!(e, M::identity(3));
    }

    #[test]
    fn exp_of_diagonal_matches_scalar_exp() {
        let e = M::from_diag(&[re(0.3), re(-1.7)]).matrix_exp().unwrap();
        assert!((e.get(0, 0).re - 0.3f64.exp()).abs() <= 1e-15);
        assert!((e.get(1, 1).re - (-1.7f64).exp()).abs() <= 1e-15);
        assert_eq!(e.get(0, 1), re(0.0));
    }

    #[test]
    fn exp_of_i_theta_sigma_z_is_phase_diagonal() {
        let theta = 1.1;
        let e = sigma_z().scale(im(theta)).matrix_exp().unwrap();
        let expected = M::from_diag(&[C::from_polar(1.0, theta), C::from_polar(1.0, -theta)]);
        assert_close(&e, &expected, 1e-14);
    }

    #[test]
    fn exp_of_nilpotent_truncates() {
        let mut n = M::zeros(2);
        n.set(0, 1, re(2.5));
        let e = n.matrix_exp().unwrap();
        assert_close(&e, &M::identity(2).add(&n), 1e-15);
    }

    #[test]
    fn exp_matches_taylor_reference() {
        for seed in 0..6 {
            let h = random_hermitian::<f64>(5, seed, 1.5);
            let a = h
                .scale(im(1.0))
                .add(&random_hermitian::<f64>(5, seed + 100, 0.4));
            let e = a.matrix_exp().unwrap();
            let r = taylor_exp(&a);
            let rel = e.sub(&r).frobenius_norm() / r.frobenius_norm();
            assert!(rel <= 1e-13, "seed {seed}: relative error {rel:.3e}");
        }
    }

    #[test]
    fn exp_of_large_norm_matches_taylor_reference() {
        let h = random_hermitian::<f64>(4, 77, 40.0); // forces scaling-and-squaring
        let a = h.scale(im(1.0));
        let e = a.matrix_exp().unwrap();
        let r = taylor_exp(&a);
        let rel = e.sub(&r).frobenius_norm() / r.frobenius_norm();
        assert!(rel <= 1e-12, "relative error {rel:.3e}");
    }

    #[test]
    fn exp_of_i_hermitian_is_unitary() {
        for seed in 0..8 {
            let h = random_hermitian::<f64>(6, seed, 3.0);
            let u = h.scale(im(1.0)).matrix_exp().unwrap();
            assert!(u.unitarity_defect() <= 1e-12);
        }
    }

    #[test]
    fn exp_overflow_is_a_range_error() {
        let a = M::from_diag(&[re(1000.0), re(0.0)]);
        match a.matrix_exp() {
            Err(Error::ExpOverflow { norm }) => assert!(norm >= 1000.0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn exp_rejects_non_finite_input() {
        let a = M::from_diag(&[re(f64::NAN), re(0.0)]);
        assert!(matches!(a.matrix_exp(), Err(Error::NonFinite)));
    }

    #[test]
    fn frechet_zero_direction_gives_zero_derivative() {
        let h = random_hermitian::<f64>(3, 2, 1.0);
        let (e, l) = exp_frechet(&h, &M::zeros(3)).unwrap();
        assert_close(&e, &h.matrix_exp().unwrap(), 1e-13);
        assert!(l.frobenius_norm() <= 1e-14);
    }

    #[test]
    fn frechet_at_zero_base_is_the_direction() {
        let e_dir = random_hermitian::<f64>(3, 11, 2.0);
        let (e, l) = exp_frechet(&M::zeros(3), &e_dir).unwrap();
        assert_close(&e, &M::identity(3), 1e-14);
        assert_close(&l, &e_dir, 1e-13);
    }

    #[test]
    fn frechet_commuting_direction_has_closed_form() {
        // e = p(m) commutes with m, so L(m, e) = exp(m) e.
        let m = random_hermitian::<f64>(4, 21, 0.8).scale(im(1.0));
        let e = m.mul(&m).scale(re(0.5)).add(&m.scale(re(2.0)));
        let (em, l) = exp_frechet(&m, &e).unwrap();
        let expected = em.mul(&e);
        let scale = residual_scale(&[&expected]);
        assert!(l.sub(&expected).frobenius_norm() / scale <= 1e-13);
    }

    #[test]
    fn frechet_satisfies_block_identity() {
        let m = random_hermitian::<f64>(4, 31, 1.2).scale(im(1.0));
        let e = random_hermitian::<f64>(4, 32, 0.9);
        let (em, _l) = exp_frechet(&m, &e).unwrap();
        // Diagonal block must agree with the directly computed exponential.
        let direct = m.matrix_exp().unwrap();
        assert!(em.sub(&direct).frobenius_norm() <= 1e-12 * residual_scale(&[&direct]));
    }

    #[test]
    fn frechet_is_linear_in_the_direction() {
        let m = random_hermitian::<f64>(3, 41, 1.0).scale(im(1.0));
        let e1 = random_hermitian::<f64>(3, 42, 1.0);
        let e2 = random_hermitian::<f64>(3, 43, 1.0);
        let (_, l1) = exp_frechet(&m, &e1).unwrap();
        let (_, l2) = exp_frechet(&m, &e2).unwrap();
        let combo = e1.scale(re(0.7)).add(&e2.scale(re(-2.0)));
        let (_, lc) = exp_frechet(&m, &combo).unwrap();
        let expected = l1.scale(re(0.7)).add(&l2.scale(re(-2.0)));
        let scale = residual_scale(&[&expected]);
        assert!(lc.sub(&expected).frobenius_norm() / scale <= 1e-11);
    }

    #[test]
    fn frechet_matches_central_difference() {
        let m = random_hermitian::<f64>(3, 51, 1.0).scale(im(1.0));
        let e = random_hermitian::<f64>(3, 52, 1.0);
        let (_, l) = exp_frechet(&m, &e).unwrap();
        let h = 1e-5;
        let plus = m.add(&e.scale(re(h))).matrix_exp().unwrap();
        let minus = m.sub(&e.scale(re(h))).matrix_exp().unwrap();
        let fd = plus.sub(&minus).scale(re(0.5 / h));
        assert!(l.sub(&fd).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn random_hermitian_is_reproducible_and_exactly_hermitian() {
        let a = random_hermitian::<f64>(8, 123, 1.0);
        let b = random_hermitian::<f64>(8, 123, 1.0);
        assert_eq!(a, b);
        assert_eq!(a.hermiticity_defect(), 0.0);
        let c = random_hermitian::<f64>(8, 124, 1.0);
        assert!(a.sub(&c).frobenius_norm() > 1e-3);
    }

    #[test]
    fn random_hermitian_scale_controls_magnitude() {
        let small = random_hermitian::<f64>(6, 7, 1e-3).frobenius_norm();
        let large = random_hermitian::<f64>(6, 7, 1e3).frobenius_norm();
        assert!((large / small - 1e6).abs() / 1e6 <= 1e-12);
    }

    #[test]
    fn lu_solve_reconstructs_identity() {
        let a = random_hermitian::<f64>(5, 61, 1.0).add(&M::identity(5).scale(re(4.0)));
        let inv = Lu::decompose(&a).unwrap().inverse().unwrap();
        assert!(a.mul(&inv).sub(&M::identity(5)).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn state_helpers_norm_and_expectation() {
        let v: Vec<C<f64>> = vec![re(0.6), im(0.8)];
        assert!((state_norm(&v) - 1.0).abs() <= 1e-15);
        let z = expectation(&sigma_z(), &v).unwrap();
        assert!((z.re - (0.36 - 0.64)).abs() <= 1e-15);
        assert!(z.im.abs() <= 1e-15);
    }

    #[test]
    fn f32_instantiation_smoke() {
        let h = random_hermitian::<f32>(3, 5, 1.0);
        let u = h.scale(C::new(0.0f32, 1.0)).matrix_exp().unwrap();
        assert!(u.unitarity_defect() <= 1e-5);
    }
}
