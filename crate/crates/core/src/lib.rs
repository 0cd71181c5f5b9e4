//! Exact construction and verification of miniversal deformations of pairs of
//! complex symmetric matrices under congruence.
//!
//! Scalars are Gaussian rationals, so every rank, span and membership question
//! is answered exactly.

pub mod blocks;
pub mod cli;
pub mod error;
pub mod exact;
pub mod patterns;
pub mod slice;
pub mod sweep;
pub mod tangent;

pub use error::{Error, Result};
