use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type the engine computes in.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Relative residual `‖A·s − f‖ / ‖f‖` accepted by the linear solver.
    fn residual_tolerance() -> Self;

    /// Largest accepted 1-norm condition estimate of a technology matrix.
    fn max_condition() -> Self;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("every f64 converts to a float type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn residual_tolerance() -> Self {
        1e-9
    }

    fn max_condition() -> Self {
        1e12
    }
}

impl Scalar for f32 {
    fn residual_tolerance() -> Self {
        1e-4
    }

    fn max_condition() -> Self {
        1e5
    }
}
