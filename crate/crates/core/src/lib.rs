//! Numerical toolkit for weighted BMOA seminorms and weighted composition
//! operators on the unit disk.

// `!(x < y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bmoa;
pub mod cplx;
pub mod error;
pub mod fixtures;
pub mod grammar;
pub mod hardy;
pub mod operators;
pub mod quad;
pub mod weights;

pub use error::{Error, Result};
