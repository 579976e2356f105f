//! Scalar abstraction shared by every numeric module.
//!
//! All simulation code is generic over [`Real`], implemented for `f32` and
//! `f64`. Tolerances scale with the precision of the scalar.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Floating-point scalar used for amplitudes and angles.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Serialize + Send + Sync + 'static
{
    /// Tolerance for validating caller-supplied data (norms, traces).
    fn input_tol() -> Self;
    /// Tolerance for a single gate application (unitarity, norm drift).
    fn gate_tol() -> Self;
    /// Tolerance for whole-circuit comparisons.
    fn circuit_tol() -> Self;

    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }
}

impl Real for f64 {
    fn input_tol() -> Self {
        1e-8
    }
    fn gate_tol() -> Self {
        1e-10
    }
    fn circuit_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn input_tol() -> Self {
        1e-4
    }
    fn gate_tol() -> Self {
        1e-5
    }
    fn circuit_tol() -> Self {
        1e-4
    }
}

/// Complex amplitude over a [`Real`] scalar.
pub type Amplitude<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn c_re<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{i·angle}`
#[inline]
pub(crate) fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::new(angle.cos(), angle.sin())
}
