//! Exact certificates for convexly independent midpoints and Minkowski sums,
//! unit and diameter distances under polytopal norms, and strictly antipodal
//! families in the plane and in 3-space.
//!
//! Points carry arbitrary-precision rational coordinates. Every claim the
//! library makes (a point is extreme, a family is strictly antipodal, a pair
//! is at norm distance one) comes with a witness that can be re-checked by
//! exact arithmetic.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod extremal;
pub mod forbidden;
pub mod geom;
pub mod norms;
pub mod rational;
pub mod reductions;

pub use error::{Error, Result};
pub use geom::{ExactPoint, PointSet};
pub use rational::Rational;
