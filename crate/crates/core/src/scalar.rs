//! Scalar abstraction shared by the numeric parts of the crate.
//!
//! Everything that touches probabilities, hyperparameters or the lower
//! bound is generic over [`Scalar`]; `f64` is the working precision used
//! by the CLI and the aliases in the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static
{
    /// Converts an `f64` literal. Every supported type can represent
    /// (an approximation of) any finite `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar conversion from f64")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("scalar conversion from usize")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Returns true when `values` are non-negative and sum to one within `tol`.
///
/// This is the single stochasticity check used for alpha rows, pi slices
/// and responsibility rows.
pub fn is_stochastic<T: Scalar>(values: impl IntoIterator<Item = T>, tol: T) -> bool {
    let mut sum = T::zero();
    for v in values {
        if v.is_nan() || v < T::zero() {
            return false;
        }
        sum = sum + v;
    }
    (sum - T::one()).abs() <= tol
}

/// Stochasticity tolerance used throughout the model types.
pub const STOCHASTIC_TOL: f64 = 1e-10;
