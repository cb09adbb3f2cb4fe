//! Efficiency-power bounds of low-dissipation heat engines, and an exactly
//! simulated two-level-atom engine to test them against.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod optimize;
pub mod quad;
pub mod tla;

pub use error::{Error, Result};
