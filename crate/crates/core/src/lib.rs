//! Quadratic semigroups e^{-t q^w} realized on the FBI side as Bergman-form
//! Gaussian kernels, with exact wavefront classification on the Gaussian
//! class.

// `!(x > tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman;
pub mod catalog;
pub mod error;
pub mod fbi;
pub mod gaussian;
pub mod holomorphic;
pub mod linalg;
pub mod ode;
pub mod report;
pub mod subspace;
pub mod symplectic;
pub mod wavefront;

pub use error::{Error, Result};
