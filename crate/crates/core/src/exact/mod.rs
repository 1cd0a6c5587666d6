//! Exact arithmetic over Q(√3) and the geometry built on it.

pub mod geom;
pub mod isometry;
pub mod matrix;
pub mod scalar;

pub use geom::{line_intersection, Intersection, LineKey, Point, StringGeom, StringKind, Vector};
pub use isometry::ScaledIsometry;
pub use matrix::Matrix;
pub use scalar::ExactScalar;
