//! Exact geometry in dimensions 2 and 3: points, predicates, extreme-point
//! tests and convex-position certificates. Every decision is made over the
//! rationals; nothing here uses a tolerance.

pub(crate) mod lp;
pub mod point;
pub mod predicates;
pub mod separation;

pub use point::{ExactPoint, PointSet};
pub use predicates::{canonical_direction, orient, orient2};
pub use separation::{
    convexly_independent, hull_vertices, is_extreme, Combination, ConvexPositionCertificate,
    ExtremeTest, LinearFunctional, Verdict, Violation,
};
