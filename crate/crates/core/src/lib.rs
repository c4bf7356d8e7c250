//! Conformable fractional integrals and numerical verification of
//! Simpson-type inequalities.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod fracint;
pub mod quadrature;
pub mod simpson;
pub mod specfun;

pub use error::{Error, Result};
