//! Reduced forms of block-triangular linear differential systems over ℚ(x).

pub mod diffsys;
pub mod error;
pub mod exactfield;
pub mod liealgebra;
pub mod linalg;
pub mod ratsolve;
pub mod reducer;

pub use error::{Error, Result};
