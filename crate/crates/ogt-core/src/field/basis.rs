//! Scalar basis functions with closed-form derivatives, and operator fields
//! built from them.
//!
//! Coordinates follow `x^0 = ct, x^1, x^2, x^3`; a derivative index `mu` in
//! `0..4` always means the partial with respect to `x^mu`, so a time
//! derivative is `c` times the `mu = 0` partial.

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::scalar::Real;

/// Number of spacetime directions.
pub const DIRECTIONS: usize = 4;

pub(crate) fn check_direction(mu: usize) -> Result<()> {
    if mu < DIRECTIONS {
        Ok(())
    } else {
        Err(Error::Direction { index: mu })
    }
}

/// A point `(x^0, x^1, x^2, x^3)` with `x^0 = ct`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint<T: Real> {
    pub coords: [T; 4],
}

impl<T: Real> SpacetimePoint<T> {
    pub fn new(coords: [T; 4]) -> Self {
        Self { coords }
    }

    pub fn origin() -> Self {
        Self {
            coords: [T::zero(); 4],
        }
    }

    /// The same point displaced by `h` along direction `mu`.
    pub fn shifted(&self, mu: usize, h: T) -> Self {
        let mut coords = self.coords;
        coords[mu] += h;
        Self { coords }
    }
}

/// Symmetry class of an operator-valued quantity under the adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Hermitian,
    AntiHermitian,
    /// No symmetry is claimed.
    Indefinite,
}

impl Symmetry {
    /// Symmetry after multiplication by `i`.
    pub fn flipped(self) -> Self {
        match self {
            Symmetry::Hermitian => Symmetry::AntiHermitian,
            Symmetry::AntiHermitian => Symmetry::Hermitian,
            Symmetry::Indefinite => Symmetry::Indefinite,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Symmetry::Hermitian => "hermitian",
            Symmetry::AntiHermitian => "anti-hermitian",
            Symmetry::Indefinite => "indefinite",
        }
    }
}

/// Phase of a plane-wave factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Cos,
    Sin,
}

/// A real scalar function of spacetime whose partials of every order are
/// again of the same form.
///
/// Two families are enough for the whole test corpus: monomials
/// `c * prod_mu (x^mu)^(p_mu)` and plane waves
/// `a * cos/sin(k.x + phi)` (Euclidean dot product over the four
/// coordinates).
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticScalar<T: Real> {
    Monomial {
        coeff: T,
        powers: [u32; 4],
    },
    Wave {
        amplitude: T,
        wavevector: [T; 4],
        phase: T,
        kind: WaveKind,
    },
}

impl<T: Real> AnalyticScalar<T> {
    pub fn constant(c: T) -> Self {
        Self::Monomial {
            coeff: c,
            powers: [0; 4],
        }
    }

    /// The coordinate function `x^mu`.
    pub fn coordinate(mu: usize) -> Result<Self> {
        check_direction(mu)?;
        let mut powers = [0u32; 4];
        powers[mu] = 1;
        Ok(Self::Monomial {
            coeff: T::one(),
            powers,
        })
    }

    pub fn monomial(coeff: T, powers: [u32; 4]) -> Self {
        Self::Monomial { coeff, powers }
    }

    pub fn cosine(amplitude: T, wavevector: [T; 4], phase: T) -> Self {
        Self::Wave {
            amplitude,
            wavevector,
            phase,
            kind: WaveKind::Cos,
        }
    }

    pub fn sine(amplitude: T, wavevector: [T; 4], phase: T) -> Self {
        Self::Wave {
            amplitude,
            wavevector,
            phase,
            kind: WaveKind::Sin,
        }
    }

    pub fn eval(&self, x: &SpacetimePoint<T>) -> T {
        match self {
            Self::Monomial { coeff, powers } => {
                let mut v = *coeff;
                for mu in 0..4 {
                    for _ in 0..powers[mu] {
                        v *= x.coords[mu];
                    }
                }
                v
            }
            Self::Wave {
                amplitude,
                wavevector,
                phase,
                kind,
            } => {
                let mut arg = *phase;
                for mu in 0..4 {
                    arg += wavevector[mu] * x.coords[mu];
                }
                match kind {
                    WaveKind::Cos => *amplitude * arg.cos(),
                    WaveKind::Sin => *amplitude * arg.sin(),
                }
            }
        }
    }

    /// Exact partial derivative along `mu`; the result is again analytic.
    pub fn derivative(&self, mu: usize) -> Self {
        debug_assert!(mu < DIRECTIONS);
        match self {
            Self::Monomial { coeff, powers } => {
                if powers[mu] == 0 {
                    Self::constant(T::zero())
                } else {
                    let mut p = *powers;
                    p[mu] -= 1;
                    let factor = T::from_u32(powers[mu]).expect("small integer fits the scalar");
                    Self::Monomial {
                        coeff: *coeff * factor,
                        powers: p,
                    }
                }
            }
            Self::Wave {
                amplitude,
                wavevector,
                phase,
                kind,
            } => {
                let k = wavevector[mu];
                match kind {
                    // d/dx cos(k.x + phi) = -k sin(k.x + phi)
                    WaveKind::Cos => Self::Wave {
                        amplitude: -*amplitude * k,
                        wavevector: *wavevector,
                        phase: *phase,
                        kind: WaveKind::Sin,
                    },
                    // d/dx sin(k.x + phi) = k cos(k.x + phi)
                    WaveKind::Sin => Self::Wave {
                        amplitude: *amplitude * k,
                        wavevector: *wavevector,
                        phase: *phase,
                        kind: WaveKind::Cos,
                    },
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Monomial { coeff, .. } => *coeff == T::zero(),
            Self::Wave { amplitude, .. } => *amplitude == T::zero(),
        }
    }
}

/// A matrix-valued field `G(x) = sum_k M_k f_k(x)` with constant coefficient
/// matrices and real analytic scalars.
///
/// Differentiation acts on the scalars only, so all derivative orders stay
/// in this class and inherit the coefficient matrices' symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticOperatorField<T: Real> {
    dim: usize,
    terms: Vec<(OperatorMatrix<T>, AnalyticScalar<T>)>,
}

impl<T: Real> AnalyticOperatorField<T> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be at least 1");
        Self {
            dim,
            terms: Vec::new(),
        }
    }

    /// A single spacetime-constant term.
    pub fn constant(matrix: OperatorMatrix<T>) -> Self {
        let dim = matrix.dim();
        Self {
            dim,
            terms: vec![(matrix, AnalyticScalar::constant(T::one()))],
        }
    }

    pub fn term(matrix: OperatorMatrix<T>, scalar: AnalyticScalar<T>) -> Self {
        let dim = matrix.dim();
        Self {
            dim,
            terms: vec![(matrix, scalar)],
        }
    }

    pub fn push_term(
        &mut self,
        matrix: OperatorMatrix<T>,
        scalar: AnalyticScalar<T>,
    ) -> Result<()> {
        if matrix.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: matrix.dim(),
            });
        }
        self.terms.push((matrix, scalar));
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(OperatorMatrix<T>, AnalyticScalar<T>)] {
        &self.terms
    }

    pub fn eval(&self, x: &SpacetimePoint<T>) -> OperatorMatrix<T> {
        let mut out = OperatorMatrix::zeros(self.dim);
        for (m, f) in &self.terms {
            let v = f.eval(x);
            if v != T::zero() {
                out = out.add(&m.scale(crate::scalar::re(v)));
            }
        }
        out
    }

    pub fn derivative(&self, mu: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, f)| {
                let df = f.derivative(mu);
                if df.is_zero() {
                    None
                } else {
                    Some((m.clone(), df))
                }
            })
            .collect();
        Self {
            dim: self.dim,
            terms,
        }
    }

    /// Structural symmetry class from the coefficient matrices (the scalars
    /// are real). The zero field counts as Hermitian.
    pub fn symmetry(&self) -> Symmetry {
        let all_h = self
            .terms
            .iter()
            .all(|(m, _)| m.hermiticity_defect() == T::zero());
        if all_h {
            return Symmetry::Hermitian;
        }
        let all_a = self
            .terms
            .iter()
            .all(|(m, _)| m.antihermiticity_defect() == T::zero());
        if all_a {
            Symmetry::AntiHermitian
        } else {
            Symmetry::Indefinite
        }
    }
}
