//! Scalar abstraction for the whole crate.
//!
//! Everything downstream works over `Complex<T>` with `T: Real`. The trait is
//! a bundle of `num-traits` capabilities plus the threading bounds the sweep
//! code needs; `f32` and `f64` are the intended instantiations.

use std::fmt;

use num_complex::Complex;

pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for the complex scalar built over `T`.
pub type C<T> = Complex<T>;

/// Converts a literal tolerance or coefficient into `T`.
///
/// Every finite `f64` converts into `f32`/`f64` (with rounding for `f32`),
/// so the panic arm is unreachable for the supported scalars.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 literal converts into the scalar type")
}

/// `i` as a complex scalar.
#[inline]
pub fn imag_unit<T: Real>() -> C<T> {
    C::new(T::zero(), T::one())
}

/// A real number lifted to the complex scalar.
#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    C::new(x, T::zero())
}

/// A purely imaginary complex scalar `i*x`.
#[inline]
pub fn im<T: Real>(x: T) -> C<T> {
    C::new(T::zero(), x)
}
