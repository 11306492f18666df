// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv;
pub mod diffusion;
pub mod error;
pub mod fraclap;
pub mod grid;
pub mod linear_wave;
pub mod nonlinear;
pub mod runner;
pub mod special;

pub use error::{Error, Result};
