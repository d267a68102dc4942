//! Numerical frequency functions for fields on Gaussian cylinder shrinkers.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod certify;
pub mod cli;
pub mod error;
pub mod fields;
pub mod frequency;
pub mod models;
pub mod numerics;

pub use error::{Error, Result};
