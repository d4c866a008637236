//! Air-sea optical wireless link modeling: sea-surface tilt statistics,
//! distribution fitting, link budget and noise, ergodic capacity, and a
//! wave-spectrum cross-check of the slope statistics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channel;
pub mod cli;
pub mod config;
pub mod eckv;
pub mod error;
pub mod fitting;
pub mod presets;
pub mod quad;
pub mod surface;
pub mod table;

pub use error::{Error, Result};
