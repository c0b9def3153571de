//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable")
    }

    /// `value`, floored at a small multiple of machine epsilon so that
    /// validity checks stay meaningful in single precision.
    #[inline]
    fn tol(value: f64) -> Self {
        Self::lit(value).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn from_usize_lossy(value: usize) -> Self {
        Self::from_usize(value).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
