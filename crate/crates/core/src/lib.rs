//! Numerical toolkit for helicoid-like minimal disks whose axes are
//! logarithmic spirals.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, configuration and
//! the command line live in the `spiralforge` crate.
#![cfg_attr(not(test), no_std)]
// negated float comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod autodiff;
pub mod bent;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod helicoid;
pub mod homogeneous;
pub mod linalg;
pub mod quadrature;
pub mod real;
pub mod sequence;
pub mod solver;
pub mod spiral;
pub mod tube;
pub mod verify;

pub use error::{Error, Result};
pub use homogeneous::Jet;
pub use linalg::{Mat3, Vec3};
pub use spiral::SpiralSpec;
