//! Numerical laboratory for single-bit Clifford uncloneable encryption.

pub mod bound;
pub mod cli;
pub mod clifford;
pub mod decoupling;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod qecm;
pub mod rng;

pub use error::{Error, Result};
