//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All linear algebra, entropies and optimizers are written against [`Real`],
//! so the same code runs in `f64` (the default, see the aliases in the crate
//! root) or in `f32` for quick low-precision sweeps.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Real floating-point type usable as the scalar of states and operators.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance for Hermiticity, trace, norm and unitarity checks.
    fn tolerance() -> Self;

    /// Looser tolerance used when validating caller-supplied Hermitian input.
    fn input_tolerance() -> Self;

    /// Draws one standard normal variate.
    fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-10
    }

    fn input_tolerance() -> Self {
        1e-8
    }

    fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    fn tolerance() -> Self {
        1e-4
    }

    fn input_tolerance() -> Self {
        1e-3
    }

    fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

/// Complex number over a [`Real`] scalar.
pub type C<R> = Complex<R>;

#[inline]
pub(crate) fn c<R: Real>(re: R, im: R) -> C<R> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<R: Real>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}

#[inline]
pub(crate) fn czero<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::zero())
}
