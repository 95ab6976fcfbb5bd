//! Meridian domains, coordinate maps, graded triangle meshes and the mesh
//! text format.

mod domain;
mod io;
mod mesh;

pub use domain::{
    from_cylindrical, from_scaled, polygon_area, to_cylindrical, to_scaled, BoundaryTag, DomainSpec, Shape, THETA_MAX_DEG,
    THETA_MIN_DEG,
};
pub use io::{read_mesh, write_mesh};
pub use mesh::{longitudinal_breakpoints, transverse_breakpoints, Grading, Mesh, MeshParams};

use thiserror::Error;

pub const MODULE_VERSION: &str = "geometry/1";

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("aperture {theta_deg} deg outside the accepted range [{min}, {max}] deg")]
    Aperture { theta_deg: f64, min: f64, max: f64 },
    #[error("truncation must be positive and finite, got {0}")]
    Truncation(f64),
    #[error("invalid mesh parameters: {0}")]
    Params(String),
    #[error("mesh would need {elements} triangles, over the budget of {limit}")]
    Resource { elements: usize, limit: usize },
    #[error("invalid mesh: {0}")]
    Invalid(String),
    #[error("mesh file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
