//! Numerical embodiment of the integral characterizations of weighted
//! Bergman spaces A^p_α on the unit ball of ℂⁿ: the four comparable
//! derivative functionals, the supporting kernel estimates, and the
//! sharpness of the exponent range 0 < q < p+2.

pub mod ball;
pub mod cli;
pub mod config;
pub mod error;
pub mod functionals;
pub mod holo;
pub mod kernels;
pub mod parse;
pub mod quad;
pub mod report;
pub mod special;

pub use error::{Error, Result};
