//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar used for amplitudes, angles and probabilities.
///
/// Implemented for `f32` and `f64`. The tolerances scale with the precision
/// of the type so that the same validation code works for both.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Squared-norm tolerance for calling a state "normalized".
    fn norm_tol() -> Self;
    /// Entrywise tolerance for `U†U = I`.
    fn unitary_tol() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Real for f64 {
    fn norm_tol() -> Self {
        1e-10
    }
    fn unitary_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn norm_tol() -> Self {
        1e-5
    }
    fn unitary_tol() -> Self {
        1e-5
    }
}
