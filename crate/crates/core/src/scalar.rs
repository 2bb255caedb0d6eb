//! Floating-point scalar abstraction.
//!
//! Everything angular in this crate is generic over [`Real`] so the same
//! dynamics run in `f32` or `f64`. The trait is a closed alias: it exists to
//! name the bound set once, not to be implemented downstream.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, SubAssign};

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Scalar type for angles, times, and probabilities.
pub trait Real:
    Float + FloatConst + FromPrimitive + AddAssign + SubAssign + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`, rounding if needed.
    ///
    /// Panics only for types that cannot represent ordinary finite `f64`
    /// values, which none of the provided impls do.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 literal must convert")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Wraps a raw angle into the principal branch `[0, 2π)`.
///
/// `rem_euclid` can round up to exactly `2π` for tiny negative inputs, so the
/// result is folded back to zero in that case.
pub fn wrap_angle<T: Real>(raw: T) -> T {
    let tau = T::TAU();
    let r = raw - tau * (raw / tau).floor();
    if r >= tau || r < T::zero() {
        T::zero()
    } else {
        r
    }
}
