//! Scalar abstraction over the floating-point width.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating-point scalar the solver is generic over: `f32` or `f64`.
///
/// Acceptance-level tolerances (1e-9 .. 1e-12) are only meaningful at
/// `f64`; the `f32` instantiation is useful for storage-bound scans.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + AddAssign
    + Sum
    + Display
    + LowerExp
    + Debug
{
    /// Convert an `f64` literal; panics only on non-representable input,
    /// which cannot happen for the fixed constants used internally.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("literal must be representable")
    }

    /// Lossy view of the scalar as `f64`, for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}
