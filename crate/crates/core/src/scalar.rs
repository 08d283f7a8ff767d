use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar backing every operator and probability in the crate.
///
/// Tolerances are written as `f64` literals and converted through
/// [`Real::tol`], which never lets a threshold drop below a few ulps of the
/// target precision. For `f64` every threshold used here survives unchanged.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in target float")
    }

    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(32.0))
    }

    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable in target float")
    }
}

impl Real for f32 {}
impl Real for f64 {}
