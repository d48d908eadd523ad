//! Scalar abstraction shared by every floating-point routine in the crate.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real floating-point scalar usable with the dense linear algebra backend.
///
/// Implemented for `f32` and `f64`. Exact dimension checks use
/// [`crate::oracle`] over big rationals instead.
pub trait Real:
    faer::traits::RealField
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Copy
    + Default
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding if necessary.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }

    /// Converts a count.
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("representable count")
    }

    fn to_f64_lossy(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
