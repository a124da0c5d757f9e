//! Ramification of Galois extensions of equal-characteristic local fields
//! F((t)), with F = F_q(u_1, ..., u_m) possibly imperfect.

pub mod additive;
pub mod characters;
pub mod cli;
pub mod error;
pub mod extensions;
pub mod ramification;
pub mod series_arith;
pub mod tangent;

pub use error::{Error, Result};
