//! The effective Born–Oppenheimer potential of the scaled guide and 1D
//! Schrödinger solvers with eigenvalue counting.

mod effective;
mod model;

pub use effective::{
    effective_potential, log_asymptote_constant, log_lower_bound_constant, potential_log_asymptote,
    potential_minimum, segment_bound, verified_x1, PotentialSample, PotentialTable, SECTION_WIDTH,
};
pub use model::{
    count_below, discretize, solve_1d, threshold_distances, Cutoff, Model1DProblem, Potential1D, Spectrum1D,
    TridiagonalPencil, BO_LEFT,
};

use thiserror::Error;

use crate::specfun::SpecfunError;

pub const MODULE_VERSION: &str = "potential1d/1";

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("x = {0} outside the domain")]
    Domain(f64),
    #[error("no sign change of the cross product at x = {x}: F({lo}) = {f_lo}, F({hi}) = {f_hi}")]
    Bracket { x: f64, lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("invalid problem: {0}")]
    Params(String),
    #[error("E = {e} is below the resolvable floor {floor} of the truncated interval")]
    BelowFloor { e: f64, floor: f64 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}
