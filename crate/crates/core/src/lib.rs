//! Interpolation with derivative data in de Branges spaces.
//!
//! Two families of structure functions are supported: the Paley–Wiener
//! exponential `E(z) = e^{-iτz}` and the homogeneous Bessel family `E_ν`.
//! On top of companion-function evaluation the crate provides node finding,
//! reproducing kernels, the interpolation series with `F(t)` and `F′(t)`
//! data, numerical checks of the associated identities, sampling and
//! reconstruction, and a verifier for one-sided extremal approximants.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod grid;
pub mod identities;
pub mod interp;
pub mod kernel;
pub mod nodes;
pub mod numerics;
pub mod sampling;
pub mod space;
mod tails;
pub mod testgen;

pub use error::{Error, Result};

/// Working real type.
pub type Real = f64;
/// Working complex type.
pub type Complex = num_complex::Complex<f64>;

pub use interp::{EvalResult, SampleSet};
pub use nodes::{Node, NodeSet};
pub use space::{CompanionValues, Family, SpaceDescriptor};
