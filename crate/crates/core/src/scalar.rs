//! Floating-point scalar abstraction: `f32` or `f64`.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt::{Debug, Display};

/// Scalar type the signal-processing core is generic over.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Copy + Send + Sync + Debug + Display + 'static
{
    /// One standard-normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from `f64`; panics only for non-finite overflow,
    /// which no caller produces.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
