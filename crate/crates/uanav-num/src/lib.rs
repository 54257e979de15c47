//! Scalar abstraction for the navigation stack.
//!
//! All geometry, network math and losses are generic over [`Real`] so the
//! same kernels run at f32 or f64. The shipped pipeline instantiates f64
//! (see the `Scalar` alias); f32 exists for cheap experiments and as a
//! compile-time check that nothing depends on a concrete float.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Conversion from an f64 literal; lossy at f32.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 literal")
    }

    /// Widening back to f64 for I/O and reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("real scalar converts to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Scalar type used by the shipped pipeline and all file formats.
pub type Scalar = f64;

#[cfg(test)]
mod tests {
    use super::*;

    fn hypot_generic<T: Real>(x: T, y: T) -> T {
        (x * x + y * y).sqrt()
    }

    #[test]
    fn both_widths_satisfy_real() {
        assert_eq!(hypot_generic(3.0f64, 4.0f64), 5.0);
        assert_eq!(hypot_generic(3.0f32, 4.0f32), 5.0);
    }

    #[test]
    fn literal_round_trip() {
        let x = f64::of(0.125);
        assert_eq!(x.to_f64_lossy(), 0.125);
        assert_eq!(f32::of(0.125), 0.125f32);
    }
}
