use nalgebra::{Cholesky, DVector, SymmetricEigen};

use crate::assembly::SparseSymmetricMatrix;

use super::{EigenError, EigenResult, SolveMeta};

/// Largest pencil handed to the dense solver.
pub const DENSE_LIMIT: usize = 2000;

/// All-eigenvalue reference solution through M = LLᵀ and the symmetric
/// eigendecomposition of L⁻¹KL⁻ᵀ; returns the `nev` smallest pairs.
pub fn dense_eigenpairs(k: &SparseSymmetricMatrix, m: &SparseSymmetricMatrix, nev: usize) -> Result<EigenResult, EigenError> {
    let n = k.dim();
    if n > DENSE_LIMIT {
        return Err(EigenError::Capacity { n, limit: DENSE_LIMIT });
    }
    let chol = Cholesky::new(m.to_dense()).ok_or(EigenError::MassNotDefinite)?;
    let l = chol.l();
    let kd = k.to_dense();
    let a = l.solve_lower_triangular(&kd).ok_or(EigenError::MassNotDefinite)?;
    let c = l.solve_lower_triangular(&a.transpose()).ok_or(EigenError::MassNotDefinite)?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    let mut values = Vec::new();
    let mut vectors = Vec::new();
    let mut residuals = Vec::new();
    let md = m.to_dense();
    for &i in idx.iter().take(nev.min(n)) {
        let y = eig.eigenvectors.column(i).into_owned();
        let x = lt.solve_upper_triangular(&y).ok_or(EigenError::MassNotDefinite)?;
        let lam = eig.eigenvalues[i];
        let r: DVector<f64> = &kd * &x - (&md * &x) * lam;
        let z = chol.solve(&r);
        residuals.push(r.dot(&z).max(0.0).sqrt());
        values.push(lam);
        vectors.push(x.iter().copied().collect());
    }
    Ok(EigenResult { values, vectors, residuals, meta: SolveMeta::default() })
}
