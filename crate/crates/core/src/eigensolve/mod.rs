//! Sparse generalised symmetric eigenproblems K x = λ M x: envelope LDLᵀ
//! with inertia counts, shift-invert block Krylov iteration, spectrum
//! slicing and a dense reference solver.

mod dense;
mod envelope;
mod krylov;
mod ordering;
mod slicing;

pub use dense::{dense_eigenpairs, DENSE_LIMIT};
pub use envelope::EnvelopeLdl;
pub use ordering::reverse_cuthill_mckee;
pub use slicing::{count_below, eigenpairs_in_interval, SliceScale};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::SparseSymmetricMatrix;
use krylov::Target;

pub const MODULE_VERSION: &str = "eigensolve/1";

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("zero or non-finite pivot at position {pivot} of the shifted factorisation")]
    Breakdown { pivot: usize },
    #[error("no shift below the spectrum found after {attempts} attempts (last shift {shift})")]
    ShiftSearch { attempts: usize, shift: f64 },
    /// `partial` holds the unconverged Ritz values of the last iteration.
    #[error("{converged} of {requested} eigenpairs converged in {iterations} iterations")]
    NonConvergence { converged: usize, requested: usize, iterations: usize, partial: Vec<f64> },
    #[error("dense solver limited to {limit} unknowns, got {n}")]
    Capacity { n: usize, limit: usize },
    #[error("mass matrix is not positive definite")]
    MassNotDefinite,
    #[error("invalid request: {0}")]
    Request(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Bound on ‖Kx - λMx‖_{M⁻¹} / ‖x‖_M, which also bounds the distance
    /// from λ to the spectrum of the pencil. It is raised to the rounding
    /// floor of the pencil when that is larger.
    pub tol: f64,
    /// Shift below the wanted eigenvalues; 0 works whenever K is definite.
    pub shift: Option<f64>,
    pub block: usize,
    pub max_basis: Option<usize>,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, shift: None, block: 4, max_basis: None, max_iter: 3000, seed: 0x5eed_c0de }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveMeta {
    pub shift: f64,
    pub seed: u64,
    pub iterations: usize,
    pub restarts: usize,
    pub factorizations: usize,
    pub solves: usize,
    /// Attainable residual level given rounding; pairs are accepted when
    /// their residual is below max(tol, floor).
    pub residual_floor: f64,
}

/// Eigenpairs in increasing order with M-normalised vectors.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// ‖Kx - λMx‖_{M⁻¹} for each pair (x is M-normalised).
    pub residuals: Vec<f64>,
    pub meta: SolveMeta,
}

impl EigenResult {
    /// Marks the values at or above `threshold`, e.g. the bottom of the
    /// essential spectrum, as not belonging to the discrete spectrum.
    pub fn essential_flags(&self, threshold: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v >= threshold).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.values = idx.iter().map(|&i| self.values[i]).collect();
        self.residuals = idx.iter().map(|&i| self.residuals[i]).collect();
        let mut vecs = std::mem::take(&mut self.vectors);
        self.vectors = idx.iter().map(|&i| std::mem::take(&mut vecs[i])).collect();
    }
}

/// Pencil with a fill-reducing ordering and a factorised mass matrix, ready
/// for repeated shifted solves.
pub struct Pencil<'a> {
    pub k: &'a SparseSymmetricMatrix,
    pub m: &'a SparseSymmetricMatrix,
    perm: Vec<usize>,
    mass: EnvelopeLdl,
    residual_floor: f64,
}

impl<'a> Pencil<'a> {
    pub fn new(k: &'a SparseSymmetricMatrix, m: &'a SparseSymmetricMatrix) -> Result<Self, EigenError> {
        if k.dim() != m.dim() || k.dim() == 0 {
            return Err(EigenError::Request(format!("dimensions {} and {}", k.dim(), m.dim())));
        }
        let perm = reverse_cuthill_mckee(&k.adjacency());
        let mass = EnvelopeLdl::factor(m, &perm).map_err(|_| EigenError::MassNotDefinite)?;
        if mass.negatives() > 0 {
            return Err(EigenError::MassNotDefinite);
        }
        let mut p = Self { k, m, perm, mass, residual_floor: 0.0 };
        p.residual_floor = 64.0 * f64::EPSILON * p.largest_eigenvalue_estimate();
        Ok(p)
    }

    /// Rough size of the largest eigenvalue (power iteration on M⁻¹K).
    /// Rounding in Kx - λMx is of order ε times this, measured in the
    /// M⁻¹ norm.
    pub fn largest_eigenvalue_estimate(&self) -> f64 {
        let n = self.dim();
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0).collect();
        let mut est = 0.0;
        for _ in 0..30 {
            let y = self.mass.solve(&self.k.apply(&x));
            let num: f64 = self.k.inner(&x, &x);
            let den: f64 = self.m.inner(&x, &x);
            est = num / den;
            let nrm = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if !(nrm > 0.0) {
                break;
            }
            x = y.into_iter().map(|v| v / nrm).collect();
        }
        est
    }

    /// Residuals below this are indistinguishable from rounding.
    pub fn residual_floor(&self) -> f64 {
        self.residual_floor
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn factor_shifted(&self, sigma: f64) -> Result<EnvelopeLdl, EigenError> {
        EnvelopeLdl::factor(&self.k.combine(1.0, self.m, -sigma), &self.perm)
    }

    /// ‖Kx - μMx‖_{M⁻¹} / ‖x‖_M.
    pub fn residual(&self, mu: f64, x: &[f64]) -> f64 {
        let kx = self.k.apply(x);
        let mx = self.m.apply(x);
        let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - mu * b).collect();
        let z = self.mass.solve(&r);
        let num: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
        (num.max(0.0) / den).sqrt()
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> Result<usize, EigenError> {
        Ok(self.factor_shifted(sigma)?.negatives())
    }

    pub(crate) fn run(
        &self,
        op: &EnvelopeLdl,
        sigma: f64,
        nev: usize,
        target: Target,
        opts: &SolverOptions,
    ) -> Result<EigenResult, EigenError> {
        let res = |mu: f64, x: &[f64]| self.residual(mu, x);
        let opts = SolverOptions { tol: opts.tol.max(self.residual_floor), ..opts.clone() };
        match krylov::shift_invert(self.k, self.m, op, sigma, nev, target, &opts, &res) {
            Ok(p) => {
                let mut out = EigenResult {
                    values: p.values,
                    vectors: p.vectors,
                    residuals: p.residuals,
                    meta: SolveMeta {
                        shift: sigma,
                        seed: opts.seed,
                        iterations: p.iterations,
                        restarts: p.restarts,
                        factorizations: 1,
                        solves: p.solves,
                        residual_floor: self.residual_floor,
                    },
                };
                out.sort();
                Ok(out)
            }
            Err((e, _partial)) => Err(e),
        }
    }
}

/// The `nev` smallest eigenpairs of K x = λ M x.
///
/// The shift must lie below the wanted eigenvalues; when the shifted matrix
/// fails to factor or is indefinite, the shift is lowered and retried.
pub fn smallest_eigenpairs(
    k: &SparseSymmetricMatrix,
    m: &SparseSymmetricMatrix,
    nev: usize,
    opts: &SolverOptions,
) -> Result<EigenResult, EigenError> {
    let pencil = Pencil::new(k, m)?;
    smallest_with_pencil(&pencil, nev, opts)
}

pub fn smallest_with_pencil(pencil: &Pencil, nev: usize, opts: &SolverOptions) -> Result<EigenResult, EigenError> {
    if nev == 0 || nev > pencil.dim() {
        return Err(EigenError::Request(format!("{nev} eigenpairs requested from a pencil of size {}", pencil.dim())));
    }
    let mut sigma = opts.shift.unwrap_or(0.0);
    let mut attempts = 0;
    loop {
        attempts += 1;
        match pencil.factor_shifted(sigma) {
            Ok(f) if f.negatives() == 0 => {
                let mut r = pencil.run(&f, sigma, nev, Target::Above, opts)?;
                r.meta.factorizations = attempts;
                return Ok(r);
            }
            _ if attempts < 8 => sigma -= (sigma.abs() + 1.0) * 0.5,
            _ => return Err(EigenError::ShiftSearch { attempts, shift: sigma }),
        }
    }
}

/// Inverse iteration about a shift just below `mu`, which damps whatever
/// the Krylov iteration left in the other eigendirections. Useful before
/// weighting a vector by something as large as e^{70}. Returns the
/// Rayleigh quotient and the M-normalised vector.
pub fn polish(pencil: &Pencil, mu: f64, x: &[f64], steps: usize) -> Result<(f64, Vec<f64>), EigenError> {
    let sigma = mu - 1e-7 * mu.abs().max(1.0);
    let f = pencil.factor_shifted(sigma)?;
    let mut x = x.to_vec();
    let mut mu = mu;
    for _ in 0..steps {
        let y = f.solve(&pencil.m.apply(&x));
        let nrm = pencil.m.inner(&y, &y).sqrt();
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(EigenError::Request("inverse iteration broke down".into()));
        }
        x = y.into_iter().map(|v| v / nrm).collect();
        mu = pencil.k.inner(&x, &x);
    }
    Ok((mu, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_laplacian() {
        let n = 200;
        let mut kt = Vec::new();
        let mut mt = Vec::new();
        for i in 0..n {
            kt.push((i, i, 2.0));
            mt.push((i, i, 1.0 + 0.5 * (i % 3) as f64));
            if i > 0 {
                kt.push((i, i - 1, -1.0));
            }
        }
        let k = SparseSymmetricMatrix::from_triplets(n, &kt);
        let m = SparseSymmetricMatrix::from_triplets(n, &mt);
        let r = smallest_eigenpairs(&k, &m, 5, &SolverOptions::default()).unwrap();
        let d = dense_eigenpairs(&k, &m, 5).unwrap();
        for i in 0..5 {
            assert!((r.values[i] - d.values[i]).abs() < 1e-10);
            assert!(r.residuals[i] <= 1e-10);
        }
    }
}
