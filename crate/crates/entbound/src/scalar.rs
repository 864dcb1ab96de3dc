//! Scalar abstraction.
//!
//! The closed-form layer is generic over the floating point type through
//! [`Real`]; matrix-backed operations additionally need nalgebra's
//! `RealField` and use [`MatrixReal`]. Both traits have blanket
//! implementations, so `f32` and `f64` qualify automatically.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating point scalar the closed forms are generic over.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Conversion from an `f64` literal or precomputed constant.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert into the scalar type")
    }

    /// Conversion from a small integer (dimensions, grid counters).
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize must convert into the scalar type")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Scalar usable in dense matrix computations (eigendecompositions).
pub trait MatrixReal: Real + nalgebra::RealField {}

impl<T> MatrixReal for T where T: Real + nalgebra::RealField {}

// Free-function mirrors of `Float` methods. In code bounded by both
// `Float` and `RealField` the method syntax is ambiguous because both
// traits define `ln`, `abs`, `sqrt`, ...; these wrappers pin the `Float`
// implementations.

#[inline]
pub(crate) fn ln<R: Real>(x: R) -> R {
    Float::ln(x)
}

#[inline]
pub(crate) fn abs<R: Real>(x: R) -> R {
    Float::abs(x)
}

#[inline]
pub(crate) fn sqrt<R: Real>(x: R) -> R {
    Float::sqrt(x)
}

#[inline]
pub(crate) fn max<R: Real>(a: R, b: R) -> R {
    Float::max(a, b)
}

#[inline]
pub(crate) fn min<R: Real>(a: R, b: R) -> R {
    Float::min(a, b)
}

#[inline]
pub(crate) fn clamp<R: Real>(x: R, lo: R, hi: R) -> R {
    min(max(x, lo), hi)
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
#[inline]
pub(crate) fn xlnx<R: Real>(x: R) -> R {
    if x <= R::zero() {
        R::zero()
    } else {
        x * ln(x)
    }
}

/// Lossy conversion into `f64` for error payloads and diagnostics.
#[inline]
pub(crate) fn to_f64<R: Real>(x: R) -> f64 {
    num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN)
}
