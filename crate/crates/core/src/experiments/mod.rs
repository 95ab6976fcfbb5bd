//! Experiment runners: configuration, the 2D solve pipeline, CSV output and
//! the verification suite.

mod config;
pub mod oracles;
mod output;
mod pipeline;
mod runs;
mod verify;

pub use config::*;
pub use output::*;
pub use pipeline::*;
pub use runs::*;
pub use verify::*;

use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::asymptotics::AsymptoticsError;
use crate::eigensolve::EigenError;
use crate::geometry::GeometryError;
use crate::potential1d::PotentialError;
use crate::specfun::SpecfunError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
