use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar underlying every complex matrix in the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` constant into this type.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real converts to f64")
    }

    /// Rescales a tolerance written for `f64` to the same number of ulps in
    /// this type. For `f64` this is the identity.
    #[inline]
    fn tol(f64_tol: f64) -> Self {
        let ulps = f64_tol / f64::EPSILON;
        Self::c(f64_tol).max(Self::epsilon() * Self::c(ulps))
    }
}

impl Real for f32 {}
impl Real for f64 {}
