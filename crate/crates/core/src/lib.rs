//! Hecke operators on the (co)homology of arithmetic groups, K-group
//! bookkeeping for the associated C*-algebras, and numerical checks of
//! boundary harmonic analysis on the hyperbolic ball.
//!
//! The exact layer ([`exact`]) is generic over the integer type; the group,
//! Hecke and K-theory layers use arbitrary-precision integers through the
//! aliases below. The boundary numerics are generic over the float type.

pub mod boundary;
pub mod error;
pub mod exact;
pub mod group;
pub mod hecke;
pub mod io;
pub mod kk;
pub mod scalar;

pub use error::{Error, Result};

/// Integer type of the group layer.
pub type Int = num_bigint::BigInt;
pub type QuadInt = exact::ring::QuadInt<Int>;
pub type ProjMatrix = exact::matrix::ProjMatrix<Int>;
pub type IntMatrix = exact::linalg::IntMatrix<Int>;
pub type ResidueRing = exact::ring::ResidueRing<Int>;
