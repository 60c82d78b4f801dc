//! Born-Infeld soliton surfaces and timelike minimal surfaces.
//!
//! * [`geometry`]: the indefinite spaces `B3` and `L3`.
//! * [`expr`]: closed-form generating functions with symbolic derivatives.
//! * [`surface`]: the Barbashov-Chernikov representation, frames, normals and
//!   finite-difference checks of the surface equations.
//! * [`bjorling`]: recovering generating functions from a curve with a
//!   prescribed normal, and the bump construction showing non-uniqueness.
//! * [`splitcomplex`]: split-complex numbers and the Björling formula for
//!   timelike minimal surfaces, plus Gale-Nikaidô injectivity evidence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bjorling;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod quadrature;
pub mod spline;
pub mod splitcomplex;
pub mod surface;

pub use error::{Error, Result};
