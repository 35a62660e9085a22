//! Scalar abstraction for the numeric core.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the statistics are generic over.
///
/// Implemented by `f32` and `f64` through the blanket impl. The crate-root
/// aliases pin `f64`; `f32` instantiations work but inherit its precision, so
/// tolerance-sensitive defaults such as the fit tolerance may need loosening.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into `F`. Infallible for float targets.
#[inline]
pub fn real<F: Real>(value: f64) -> F {
    F::from_f64(value).expect("f64 constant converts to any Real scalar")
}

/// Converts a count into `F`.
#[inline]
pub fn real_usize<F: Real>(value: usize) -> F {
    // usize -> f64 is exact for every count this crate can produce.
    real(value as f64)
}

/// Mean of a slice. Empty input is the caller's contract violation.
#[inline]
pub fn mean<F: Real>(values: &[F]) -> F {
    debug_assert!(!values.is_empty());
    values.iter().copied().sum::<F>() / real_usize(values.len())
}
