//! Closed-form asymptotic laws, counting staircases built from computed
//! spectra, and localization diagnostics of eigenfunctions.

mod laws;
mod localization;
mod staircase;

pub use laws::{
    bridge_coupling, counting_asymptote, counting_coefficient, inverse_square_coefficient, lambda_delta_expansion,
    lambda_to_mu, mu_to_lambda, mu_two_term, ExpansionCoefficients, ExpansionVariant,
};
pub use localization::{
    agmon_ratio, leakage_abscissa, mass_fraction_beyond, AgmonRatio, AgmonWeight, AgmonWeightParams, FeField,
    MAX_EXPONENT,
};
pub use staircase::{distance_fit, jump_locations, linear_fit, staircase, staircase_fit, LinearFit};

use thiserror::Error;

pub const MODULE_VERSION: &str = "asymptotics/1";

#[derive(Debug, Error)]
pub enum AsymptoticsError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid input: {0}")]
    Params(String),
}
