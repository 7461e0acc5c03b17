//! Shared numerical substrate.
//!
//! Everything in here is generic over the floating point type through
//! [`Scalar`]; the rest of the crate instantiates it at `f64`. The one
//! exception is [`dd`], which is a double-double type built out of `f64`
//! pairs and is only meaningful at that width.

pub mod dd;
pub mod diff;
pub mod extrapolate;
pub mod gamma;
pub mod quad;
pub mod root;
pub mod sum;

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

pub use diff::{central_difference, central_difference_complex};
pub use extrapolate::{extrapolate_limit, Extrapolated};
pub use gamma::{gamma, ln_gamma};
pub use quad::{integrate, integrate_fixed, IntegralResult, QuadratureSpec, TailModel};
pub use root::refine_root;
pub use sum::{compensated_sum, compensated_sum_real, ComplexSum, NeumaierSum};

/// Floating point types the numerical substrate works with (`f32`, `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}
