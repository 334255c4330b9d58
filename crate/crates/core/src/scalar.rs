//! Scalar abstraction for the numeric kernel.
//!
//! Everything in this crate is generic over a real floating-point scalar.
//! `f64` is what the CLI and most tests use; `f32` works wherever the
//! tolerances of the computation at hand make sense.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar underlying all complex arithmetic in the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant (tolerances, defaults) into the working scalar.
///
/// Panics only if the scalar type cannot represent ordinary small constants,
/// which no `Real` implementation we ship does.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant must be representable in the scalar type")
}

/// Converts the working scalar to `f64` for error payloads and reports.
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
