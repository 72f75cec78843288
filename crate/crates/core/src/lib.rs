//! Fields of values, numerical radii and the structure of half-radial
//! matrices (`‖A‖ = 2r(A)`), together with the Crouzeix-ratio machinery built
//! on the Crabb–Choi–Crouzeix matrix.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod crouzeix;
pub mod error;
pub mod fov;
pub mod golden;
pub mod halfradial;
pub mod linalg;
pub mod matrix;
pub mod oracle;

pub use error::{Error, Result};
pub use matrix::{cis, inner, CVector, ComplexMatrix, C64};
