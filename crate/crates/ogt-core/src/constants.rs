//! Physical constants and the derived coupling.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Charge and unit constants entering the gauge algebra.
///
/// The derived coupling is `kappa = q / (hbar c)`; every commutator term in
/// the field strength and the covariant derivatives carries `i*kappa`.
/// Defaults are natural units, `q = hbar = c = eps0 = mu0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T: Real> {
    pub q: T,
    pub hbar: T,
    pub c: T,
    pub eps0: T,
    pub mu0: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new(q: T, hbar: T, c: T, eps0: T, mu0: T) -> Result<Self> {
        let all = [q, hbar, c, eps0, mu0];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConstants {
                reason: "constants must be finite".into(),
            });
        }
        if hbar <= T::zero() || c <= T::zero() || eps0 <= T::zero() || mu0 <= T::zero() {
            return Err(Error::InvalidConstants {
                reason: "hbar, c, eps0, mu0 must be positive".into(),
            });
        }
        Ok(Self {
            q,
            hbar,
            c,
            eps0,
            mu0,
        })
    }

    /// Natural units: everything 1.
    pub fn natural() -> Self {
        Self {
            q: T::one(),
            hbar: T::one(),
            c: T::one(),
            eps0: T::one(),
            mu0: T::one(),
        }
    }

    /// The coupling `kappa = q / (hbar c)`.
    #[inline]
    pub fn kappa(&self) -> T {
        self.q / (self.hbar * self.c)
    }

    /// True when `q = 0`, i.e. the gauge transformation degenerates to the
    /// identity and the potential transformation is undefined.
    #[inline]
    pub fn is_chargeless(&self) -> bool {
        self.q == T::zero()
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units_have_unit_coupling() {
        let k: PhysicalConstants<f64> = PhysicalConstants::natural();
        assert_eq!(k.kappa(), 1.0);
        assert!(!k.is_chargeless());
    }

    #[test]
    fn kappa_tracks_q_over_hbar_c() {
        let k = PhysicalConstants::new(2.0_f64, 0.5, 4.0, 1.0, 1.0).unwrap();
        assert_eq!(k.kappa(), 1.0);
    }

    #[test]
    fn rejects_nonpositive_units() {
        assert!(PhysicalConstants::new(1.0_f64, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0_f64, 1.0, -1.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(f64::NAN, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_charge_is_valid_but_flagged() {
        let k = PhysicalConstants::new(0.0_f64, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(k.is_chargeless());
        assert_eq!(k.kappa(), 0.0);
    }
}
