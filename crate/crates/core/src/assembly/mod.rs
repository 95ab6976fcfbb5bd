//! Weighted finite-element matrices of the fiber operators on a meridian
//! mesh, and elimination of constrained degrees of freedom.

mod lagrange;
mod quadrature;
mod sparse;

pub use lagrange::{basis, Affine, DofMap};
pub use quadrature::{gauss_legendre, TriangleRule};
pub use sparse::SparseSymmetricMatrix;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{BoundaryTag, Mesh};

pub const MODULE_VERSION: &str = "assembly/1";

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("mesh is degenerate: {0}")]
    DegenerateMesh(String),
    #[error("polynomial degree {0} not supported (use 1 or 2)")]
    Degree(u8),
    #[error("weight is not positive inside triangle {triangle}")]
    WeightNotPositive { triangle: usize },
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

/// The planar coordinates a mesh lives in, together with the parameters of
/// the quadratic form.
///
/// * `Rotated`: (s, u), weight r = s sin θ + u cos θ, fiber index m.
/// * `Reference`: the aperture-π/4 frame (ŝ, û) with ŝ = s tan θ; weight
///   ŝ + û and tan²θ in front of the longitudinal derivative. Its Rayleigh
///   quotient is nondecreasing in θ for every fixed test function.
/// * `Scaled`: (x, y), weight y, form h²|∂x ψ|² + |∂y ψ|².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Coordinates {
    Rotated { theta: f64, m: u32 },
    Reference { theta: f64 },
    Scaled { h: f64 },
}

impl Coordinates {
    pub fn weight(&self, p: [f64; 2]) -> f64 {
        match *self {
            Coordinates::Rotated { theta, .. } => p[0] * theta.sin() + p[1] * theta.cos(),
            Coordinates::Reference { .. } => p[0] + p[1],
            Coordinates::Scaled { .. } => p[1],
        }
    }

    /// Coefficients of |∂₁ψ|² and |∂₂ψ|².
    pub fn anisotropy(&self) -> [f64; 2] {
        match *self {
            Coordinates::Rotated { .. } => [1.0, 1.0],
            Coordinates::Reference { theta } => [theta.tan().powi(2), 1.0],
            Coordinates::Scaled { h } => [h * h, 1.0],
        }
    }

    pub fn fiber(&self) -> u32 {
        match *self {
            Coordinates::Rotated { m, .. } => m,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FiberProblem<'a> {
    pub mesh: &'a Mesh,
    pub coords: Coordinates,
    pub degree: u8,
}

/// Stiffness and mass matrices on the full space of degrees of freedom.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub stiffness: SparseSymmetricMatrix,
    pub mass: SparseSymmetricMatrix,
    pub dofs: DofMap,
    pub coords: Coordinates,
}

type Local = ([usize; 6], [[f64; 6]; 6], [[f64; 6]; 6]);

pub fn assemble(problem: &FiberProblem) -> Result<Assembled, AssemblyError> {
    assemble_with_rule(problem, &TriangleRule::degree5())
}

pub fn assemble_with_rule(problem: &FiberProblem, rule: &TriangleRule) -> Result<Assembled, AssemblyError> {
    let mesh = problem.mesh;
    if mesh.triangles.is_empty() {
        return Err(AssemblyError::DegenerateMesh("no triangles".into()));
    }
    let dofs = DofMap::new(mesh, problem.degree)?;
    let coords = problem.coords;
    let m2 = (coords.fiber() as f64).powi(2);
    let [cx, cy] = coords.anisotropy();
    let nl = dofs.local_count();

    let locals: Vec<Result<Local, AssemblyError>> = (0..mesh.triangles.len())
        .into_par_iter()
        .map(|t| {
            let a = Affine::new(mesh.triangles[t].map(|i| mesh.nodes[i]));
            if !(a.area > 0.0) {
                return Err(AssemblyError::DegenerateMesh(format!("triangle {t} has non-positive area")));
            }
            let mut ke = [[0.0; 6]; 6];
            let mut me = [[0.0; 6]; 6];
            let mut v = [0.0; 6];
            let mut g = [[0.0; 2]; 6];
            for (l, w) in rule.points.iter().zip(&rule.weights) {
                let omega = coords.weight(a.point(*l));
                if !(omega > 0.0) {
                    return Err(AssemblyError::WeightNotPositive { triangle: t });
                }
                basis(problem.degree, &a, *l, &mut v, &mut g);
                let wq = w * a.area * omega;
                let wm = w * a.area * m2 / omega;
                for i in 0..nl {
                    for j in 0..=i {
                        let k = wq * (cx * g[i][0] * g[j][0] + cy * g[i][1] * g[j][1]) + wm * v[i] * v[j];
                        ke[i][j] += k;
                        me[i][j] += wq * v[i] * v[j];
                    }
                }
            }
            Ok((dofs.cell_dofs[t], ke, me))
        })
        .collect();

    let n = dofs.len();
    let mut kt = Vec::with_capacity(mesh.triangles.len() * nl * (nl + 1) / 2);
    let mut mt = Vec::with_capacity(kt.capacity());
    for loc in locals {
        let (d, ke, me) = loc?;
        for i in 0..nl {
            for j in 0..=i {
                kt.push((d[i], d[j], ke[i][j]));
                mt.push((d[i], d[j], me[i][j]));
            }
        }
    }
    Ok(Assembled {
        stiffness: SparseSymmetricMatrix::from_triplets(n, &kt),
        mass: SparseSymmetricMatrix::from_triplets(n, &mt),
        dofs,
        coords,
    })
}

/// The pencil restricted to the unconstrained degrees of freedom.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub stiffness: SparseSymmetricMatrix,
    pub mass: SparseSymmetricMatrix,
    /// Full index of each reduced dof.
    pub free: Vec<usize>,
    pub full_len: usize,
}

impl Reduced {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Extends a reduced vector by zero on the constrained dofs.
    pub fn extend(&self, x: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.full_len];
        for (&i, &v) in self.free.iter().zip(x) {
            full[i] = v;
        }
        full
    }
}

/// Eliminates every dof lying on an edge with one of `constrained` tags.
/// For m ≠ 0 the axis must be among them: otherwise ψ/r is not square
/// integrable and the form is not the one of the fiber operator.
pub fn apply_dirichlet(sys: &Assembled, constrained: &[BoundaryTag]) -> Result<Reduced, AssemblyError> {
    if sys.coords.fiber() != 0 && !constrained.contains(&BoundaryTag::Axis) {
        return Err(AssemblyError::ContractViolation(format!(
            "fiber index m = {} requires the axis degrees of freedom to be constrained",
            sys.coords.fiber()
        )));
    }
    let free: Vec<usize> = (0..sys.dofs.len()).filter(|&i| !constrained.iter().any(|&t| sys.dofs.has_tag(i, t))).collect();
    if free.is_empty() {
        return Err(AssemblyError::DegenerateMesh("every degree of freedom is constrained".into()));
    }
    Ok(Reduced {
        stiffness: sys.stiffness.submatrix(&free),
        mass: sys.mass.submatrix(&free),
        free,
        full_len: sys.dofs.len(),
    })
}

/// The boundary conditions of the fiber problem: Dirichlet on the cone
/// walls and the truncation, and on the axis iff m ≠ 0.
pub fn apply_constraints(sys: &Assembled) -> Result<Reduced, AssemblyError> {
    let mut tags = vec![BoundaryTag::DirichletWall, BoundaryTag::Truncation];
    if sys.coords.fiber() != 0 {
        tags.push(BoundaryTag::Axis);
    }
    apply_dirichlet(sys, &tags)
}

/// Assembly followed by [`apply_constraints`].
pub fn assemble_reduced(problem: &FiberProblem) -> Result<(Assembled, Reduced), AssemblyError> {
    let sys = assemble(problem)?;
    let red = apply_constraints(&sys)?;
    Ok((sys, red))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, MeshParams, Shape};

    #[test]
    fn mass_integrates_weight() {
        // the mass matrix summed over all entries is the weighted area
        let theta = 0.6;
        let d = DomainSpec::new(Shape::MeridianGuide, theta, 4.0).unwrap();
        let mesh = Mesh::generate(&d, &MeshParams::default()).unwrap();
        for deg in [1, 2] {
            let sys = assemble(&FiberProblem { mesh: &mesh, coords: Coordinates::Rotated { theta, m: 0 }, degree: deg }).unwrap();
            let ones = vec![1.0; sys.dofs.len()];
            let total = sys.mass.inner(&ones, &ones);
            // integral of r over the polygon: area times the weight at the centroid
            let exact: f64 = {
                let p = d.polygon();
                let mut acc = 0.0;
                for i in 1..p.len() - 1 {
                    let a = crate::geometry::polygon_area(&[p[0], p[i], p[i + 1]]);
                    let c = [(p[0][0] + p[i][0] + p[i + 1][0]) / 3.0, (p[0][1] + p[i][1] + p[i + 1][1]) / 3.0];
                    acc += a * (c[0] * theta.sin() + c[1] * theta.cos());
                }
                acc
            };
            assert!((total - exact).abs() < 1e-10 * exact);
            assert!(sys.stiffness.apply(&ones).iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn nonzero_fiber_needs_axis() {
        let d = DomainSpec::new(Shape::MeridianGuide, 0.5, 3.0).unwrap();
        let mesh = Mesh::generate(&d, &MeshParams::default()).unwrap();
        let sys = assemble(&FiberProblem { mesh: &mesh, coords: Coordinates::Rotated { theta: 0.5, m: 1 }, degree: 1 }).unwrap();
        assert!(matches!(apply_dirichlet(&sys, &[BoundaryTag::DirichletWall]), Err(AssemblyError::ContractViolation(_))));
        assert!(apply_constraints(&sys).is_ok());
    }
}
