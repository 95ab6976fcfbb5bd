use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::assembly::{assemble, apply_constraints, Assembled, Coordinates, FiberProblem, Reduced, SparseSymmetricMatrix};
use crate::eigensolve::{
    dense_eigenpairs, eigenpairs_in_interval, smallest_with_pencil, EigenResult, Pencil, SliceScale, SolverOptions,
};
use crate::geometry::{to_cylindrical, transverse_breakpoints, DomainSpec, Mesh, MeshParams, Shape};

/// Discretisation settings shared by the 2D runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Discretization {
    pub degree: u8,
    pub mesh: MeshParams,
    pub solver: SolverOptions,
}

impl Default for Discretization {
    fn default() -> Self {
        Self { degree: 2, mesh: MeshParams::default(), solver: SolverOptions::default() }
    }
}

/// How the meridian domain Ω(θ) is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    /// (s, u) with weight s sin θ + u cos θ; supports every fiber index.
    Rotated,
    /// The aperture-π/4 domain with ŝ = s tan θ. One mesh serves every θ
    /// and the discrete eigenvalues are nondecreasing in θ. Fiber 0 only.
    Reference,
}

/// Truncation giving `decay_lengths` decay lengths 1/√(1 − μ) beyond the
/// corner for an eigenvalue μ below the threshold 1.
pub fn truncation_for(mu_target: f64, decay_lengths: f64) -> f64 {
    decay_lengths / (1.0 - mu_target).max(1e-12).sqrt()
}

/// A solved 2D problem together with everything needed to post-process it.
#[derive(Debug, Clone)]
pub struct Solved {
    pub domain: DomainSpec,
    pub mesh: Mesh,
    pub assembled: Assembled,
    pub reduced: Reduced,
    pub result: EigenResult,
}

impl Solved {
    pub fn dofs(&self) -> usize {
        self.reduced.dim()
    }

    /// Eigenvector `i` extended by zero to every dof of the mesh.
    pub fn full_vector(&self, i: usize) -> Vec<f64> {
        self.reduced.extend(&self.result.vectors[i])
    }
}

fn build(domain: DomainSpec, coords: Coordinates, disc: &Discretization) -> Result<(DomainSpec, Mesh, Assembled, Reduced), ExperimentError> {
    let mesh = Mesh::generate(&domain, &disc.mesh)?;
    let assembled = assemble(&FiberProblem { mesh: &mesh, coords, degree: disc.degree })?;
    let reduced = apply_constraints(&assembled)?;
    Ok((domain, mesh, assembled, reduced))
}

/// The meridian problem of fiber `m` at aperture θ, truncated at
/// s = `truncation` (ŝ = `truncation`·tan θ in the reference frame).
pub fn meridian_system(
    theta: f64,
    m: u32,
    truncation: f64,
    frame: Frame,
    disc: &Discretization,
) -> Result<(DomainSpec, Mesh, Assembled, Reduced), ExperimentError> {
    match frame {
        Frame::Rotated => build(
            DomainSpec::new(Shape::MeridianGuide, theta, truncation)?,
            Coordinates::Rotated { theta, m },
            disc,
        ),
        Frame::Reference => {
            if m != 0 {
                return Err(ExperimentError::Config("the reference frame carries fiber 0 only".into()));
            }
            DomainSpec::new(Shape::MeridianGuide, theta, truncation)?;
            build(
                DomainSpec::new(Shape::MeridianGuide, FRAC_PI_4, truncation * theta.tan())?,
                Coordinates::Reference { theta },
                disc,
            )
        }
    }
}

fn solve_lowest(
    parts: (DomainSpec, Mesh, Assembled, Reduced),
    k: usize,
    opts: &SolverOptions,
) -> Result<Solved, ExperimentError> {
    let (domain, mesh, assembled, reduced) = parts;
    let pencil = Pencil::new(&reduced.stiffness, &reduced.mass)?;
    let result = smallest_with_pencil(&pencil, k, opts)?;
    Ok(Solved { domain, mesh, assembled, reduced, result })
}

/// The k lowest eigenvalues of fiber 0 for every θ of `thetas`, all on the
/// single reference-frame mesh truncated at ŝ = `reference_truncation`.
/// Each θ is solved independently; a failure at one θ leaves the others.
pub fn reference_sweep(
    thetas: &[f64],
    k: usize,
    reference_truncation: f64,
    disc: &Discretization,
) -> Result<(Mesh, Vec<Result<EigenResult, ExperimentError>>), ExperimentError> {
    let domain = DomainSpec::new(Shape::MeridianGuide, FRAC_PI_4, reference_truncation)?;
    let mesh = Mesh::generate(&domain, &disc.mesh)?;
    let results = thetas
        .par_iter()
        .map(|&theta| -> Result<EigenResult, ExperimentError> {
            DomainSpec::new(Shape::MeridianGuide, theta, 1.0)?;
            let assembled = assemble(&FiberProblem { mesh: &mesh, coords: Coordinates::Reference { theta }, degree: disc.degree })?;
            let reduced = apply_constraints(&assembled)?;
            let pencil = Pencil::new(&reduced.stiffness, &reduced.mass)?;
            Ok(smallest_with_pencil(&pencil, k, &disc.solver)?)
        })
        .collect();
    Ok((mesh, results))
}

/// The k lowest eigenvalues μ_n of fiber m.
pub fn meridian_spectrum(
    theta: f64,
    m: u32,
    k: usize,
    truncation: f64,
    frame: Frame,
    disc: &Discretization,
) -> Result<Solved, ExperimentError> {
    solve_lowest(meridian_system(theta, m, truncation, frame, disc)?, k, &disc.solver)
}

/// The k lowest eigenvalues of −h²∂ₓ² − y⁻¹∂_y(y∂_y) on the scaled guide
/// (truncated at x = `truncation`) or on the scaled triangle.
pub fn scaled_spectrum(h: f64, shape: Shape, k: usize, truncation: f64, disc: &Discretization) -> Result<Solved, ExperimentError> {
    if !shape.is_scaled() {
        return Err(ExperimentError::Config(format!("{shape:?} is not a scaled shape")));
    }
    let domain = DomainSpec::scaled(shape, h, truncation)?;
    solve_lowest(build(domain, Coordinates::Scaled { h }, disc)?, k, &disc.solver)
}

/// Lowest Dirichlet eigenvalue of −∂ᵤ² on (0, π) discretised with the
/// transverse breakpoints of `mesh` and elements of `degree`: the discrete
/// counterpart of the threshold 1 seen by the far field of the meridian
/// mesh.
pub fn transverse_threshold(mesh: &MeshParams, degree: u8) -> Result<f64, ExperimentError> {
    let ts: Vec<f64> = transverse_breakpoints(mesh).into_iter().map(|t| t * PI).collect();
    let cells = ts.len() - 1;
    let per = degree as usize;
    let n = cells * per + 1;
    let mut kt = Vec::new();
    let mut mt = Vec::new();
    for c in 0..cells {
        let len = ts[c + 1] - ts[c];
        let (ke, me): (Vec<Vec<f64>>, Vec<Vec<f64>>) = if degree == 1 {
            (vec![vec![1.0, -1.0], vec![-1.0, 1.0]], vec![vec![2.0, 1.0], vec![1.0, 2.0]])
        } else {
            // nodes: left, middle, right
            (
                vec![vec![7.0, -8.0, 1.0], vec![-8.0, 16.0, -8.0], vec![1.0, -8.0, 7.0]],
                vec![vec![4.0, 2.0, -1.0], vec![2.0, 16.0, 2.0], vec![-1.0, 2.0, 4.0]],
            )
        };
        let (ks, ms) = if degree == 1 { (1.0 / len, len / 6.0) } else { (1.0 / (3.0 * len), len / 30.0) };
        for i in 0..=per {
            for j in 0..=i {
                kt.push((c * per + i, c * per + j, ks * ke[i][j]));
                mt.push((c * per + i, c * per + j, ms * me[i][j]));
            }
        }
    }
    let free: Vec<usize> = (1..n - 1).collect();
    let k = SparseSymmetricMatrix::from_triplets(n, &kt).submatrix(&free);
    let m = SparseSymmetricMatrix::from_triplets(n, &mt).submatrix(&free);
    Ok(dense_eigenpairs(&k, &m, 1)?.values[0])
}

/// Eigenvalues of the meridian problem (fiber 0) in [0, threshold − e_min)
/// by spectrum slicing, with `threshold` the discrete transverse threshold.
pub struct Counted {
    pub solved: Solved,
    pub threshold: f64,
}

pub fn counting_spectrum(
    theta: f64,
    truncation: f64,
    e_min: f64,
    max_per_slice: usize,
    disc: &Discretization,
) -> Result<Counted, ExperimentError> {
    let threshold = transverse_threshold(&disc.mesh, disc.degree)?;
    let (domain, mesh, assembled, reduced) = meridian_system(theta, 0, truncation, Frame::Rotated, disc)?;
    let pencil = Pencil::new(&reduced.stiffness, &reduced.mass)?;
    let result = eigenpairs_in_interval(
        &pencil,
        0.0,
        threshold - e_min,
        max_per_slice,
        SliceScale::LogBelow(threshold),
        &disc.solver,
    )?;
    Ok(Counted { solved: Solved { domain, mesh, assembled, reduced, result }, threshold })
}

/// Physical meridian coordinates (z, r) of a point of the rotated frame.
pub fn physical_point(su: [f64; 2], theta: f64) -> [f64; 2] {
    let [r, z] = to_cylindrical(su, theta);
    [z, r]
}
