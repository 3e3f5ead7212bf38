//! Scalar abstraction for the closed-form model and likelihood code.
//!
//! The probability tables and the partial likelihood are written once against
//! [`Scalar`] and instantiated for `f64` (the default everywhere downstream)
//! and `f32`. Optimization, simulation and the experiment harness are `f64`
//! only.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// floating point: f32 or f64
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance used when checking that probabilities sum to one.
    fn sum_tolerance() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in every Scalar")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn quarter() -> Self {
        Self::lit(0.25)
    }
}

impl Scalar for f32 {
    fn sum_tolerance() -> Self {
        64.0 * f32::EPSILON
    }
}

impl Scalar for f64 {
    fn sum_tolerance() -> Self {
        1e-12
    }
}

/// `x * ln(y)` with the convention `0 * ln(0) = 0`.
#[inline]
pub(crate) fn xlogy<T: Scalar>(x: T, y: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x * y.ln()
    }
}
