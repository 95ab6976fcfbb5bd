//! Bessel functions of order 0 and 1, the Airy function, and tables of
//! their zeros.

mod airy;
mod bessel;
mod zeros;

pub use airy::{airy_ai, airy_ai_pair, AIRY_AI_0, AIRY_AIP_0};
pub use bessel::{bessel_pair, eval_j0, eval_j0_prime, eval_j1, eval_y0, eval_y1, BesselPair};
pub use zeros::{airy_zero, bessel_j0_zero, first_bessel_zero, ZERO_TABLE_CAPACITY};

use thiserror::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("argument {0} outside the domain of the function")]
    Domain(f64),
    #[error("zero index {index} not available (valid indices are 1..={capacity})")]
    Capacity { index: usize, capacity: usize },
}

/// Version string written into output headers.
pub const MODULE_VERSION: &str = "specfun/1";
