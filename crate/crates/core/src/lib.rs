// `!(x > 0)` is used on purpose so NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accum;
pub mod averages;
pub mod config;
pub mod diophantine;
pub mod dynsys;
pub mod equidist;
pub mod error;
pub mod experiment;
pub mod expr;
pub mod kernels;
pub mod limits;
pub mod precision;
pub mod presets;
pub mod suspension;

pub use error::{Error, Result};

#[cfg(test)]
mod oracle;
