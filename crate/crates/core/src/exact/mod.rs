//! Exact arithmetic: quadratic integer rings, projective matrices, integer
//! linear algebra.

pub mod linalg;
pub mod matrix;
pub mod ring;
