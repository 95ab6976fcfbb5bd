use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::SparseSymmetricMatrix;

use super::envelope::EnvelopeLdl;
use super::{EigenError, SolverOptions};

/// Which eigenvalues of the pencil the iteration is after, relative to the
/// shift σ of the operator (K - σM)⁻¹M.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Target {
    /// the smallest eigenvalues above σ (largest positive θ)
    Above,
    /// the eigenvalues nearest σ (largest |θ|)
    Nearest,
}

pub(crate) struct RitzPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub restarts: usize,
    pub solves: usize,
}

pub(crate) struct Partial {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

struct Basis {
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
    w: Vec<Vec<f64>>,
    h: DMatrix<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn combine(cols: &[Vec<f64>], coef: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; cols[0].len()];
    for (j, c) in cols.iter().enumerate() {
        let a = coef(j);
        if a != 0.0 {
            axpy(a, c, &mut out);
        }
    }
    out
}

/// Block Rayleigh–Ritz iteration on the shift-invert operator with thick
/// restarts. New directions are the residuals of the leading unconverged
/// Ritz pairs, so the basis spans the same space as block Lanczos while
/// keeping explicit M-orthogonality.
///
/// `true_residual(μ, x)` is checked once the Ritz residuals meet the
/// internal tolerance; the internal tolerance is tightened until it passes.
pub(crate) fn shift_invert(
    k: &SparseSymmetricMatrix,
    m: &SparseSymmetricMatrix,
    op: &EnvelopeLdl,
    sigma: f64,
    nev: usize,
    target: Target,
    opts: &SolverOptions,
    true_residual: &dyn Fn(f64, &[f64]) -> f64,
) -> Result<RitzPairs, (EigenError, Partial)> {
    let n = k.dim();
    let nev = nev.min(n);
    let b = opts.block.max(1).min(n);
    let max_basis = opts.max_basis.unwrap_or(3 * nev + 3 * b).max(nev + 2 * b).min(n);
    let keep = (nev + b).min(max_basis - b).max(nev.min(max_basis - b));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis = Basis { v: Vec::new(), mv: Vec::new(), w: Vec::new(), h: DMatrix::zeros(0, 0) };
    let mut solves = 0;
    let mut restarts = 0;
    let mut tol_k = opts.tol * 1e-2;
    let mut tightenings = 0;
    let debug = std::env::var_os("CONILAY_KRYLOV_TRACE").is_some();

    let start: Vec<Vec<f64>> = (0..b).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    extend(&mut basis, start, m, op, &mut rng, &mut solves);

    let mut last = Partial { values: Vec::new(), residuals: Vec::new(), iterations: 0 };
    for iter in 1..=opts.max_iter {
        let dim = basis.v.len();
        let hs = (&basis.h + basis.h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(hs);
        let mut order: Vec<usize> = (0..dim).collect();
        match target {
            Target::Above => order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a])),
            Target::Nearest => order.sort_by(|&a, &c| eig.eigenvalues[c].abs().total_cmp(&eig.eigenvalues[a].abs())),
        }
        // in `Above` mode, negative θ are eigenvalues below σ and are never wanted
        let usable = order.iter().filter(|&&i| target == Target::Nearest || eig.eigenvalues[i] > 0.0).count();
        let want = nev.min(usable);

        let mut values = Vec::new();
        let mut residuals = Vec::new();
        let mut ritz = Vec::new();
        let mut resid_vecs = Vec::new();
        let mut norms = Vec::new();
        let scan = (want + b).min(usable);
        for (rank, &i) in order.iter().take(scan).enumerate() {
            let theta = eig.eigenvalues[i];
            let y = eig.eigenvectors.column(i);
            let x = combine(&basis.v, |j| y[j]);
            let mut r = combine(&basis.w, |j| y[j]);
            axpy(-theta, &x, &mut r);
            let mr = m.apply(&r);
            let rn = dot(&r, &mr).max(0.0).sqrt() / theta.abs();
            if rank < want {
                values.push(sigma + 1.0 / theta);
                residuals.push(rn);
                ritz.push(x);
            }
            norms.push(rn);
            resid_vecs.push(r);
        }
        last = Partial { values: values.clone(), residuals: residuals.clone(), iterations: iter };

        let mut unconverged: Vec<usize> = (0..norms.len()).filter(|&r| norms[r] > tol_k).collect();
        if debug {
            eprintln!("krylov it={iter} dim={dim} tol={tol_k:e} values={values:?} res={residuals:?}");
        }
        let all_in = want == nev && unconverged.iter().all(|&r| r >= want);
        if all_in {
            let true_res: Vec<f64> = values.iter().zip(&ritz).map(|(&mu, x)| true_residual(mu, x)).collect();
            if true_res.iter().all(|&r| r <= opts.tol) {
                return Ok(RitzPairs { values, vectors: ritz, residuals: true_res, iterations: iter, restarts, solves });
            }
            tightenings += 1;
            if tightenings > 6 || tol_k < 1e-14 {
                last.residuals = true_res;
                let partial = last.values.clone();
                return Err((EigenError::NonConvergence { converged: 0, requested: nev, iterations: iter, partial }, last));
            }
            tol_k *= 1e-2;
            unconverged = (0..norms.len()).filter(|&r| norms[r] > tol_k).collect();
        }
        if basis.v.len() >= n {
            break;
        }

        let mut new: Vec<Vec<f64>> = Vec::with_capacity(b);
        for &rank in &unconverged {
            if new.len() == b {
                break;
            }
            new.push(std::mem::take(&mut resid_vecs[rank]));
        }
        while new.len() < b {
            new.push((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
        }

        if basis.v.len() + new.len() > max_basis {
            restarts += 1;
            let kept: Vec<usize> = order.iter().take(keep.min(dim)).copied().collect();
            let y = &eig.eigenvectors;
            let v: Vec<Vec<f64>> = kept.iter().map(|&i| combine(&basis.v, |j| y[(j, i)])).collect();
            let mv: Vec<Vec<f64>> = kept.iter().map(|&i| combine(&basis.mv, |j| y[(j, i)])).collect();
            let w: Vec<Vec<f64>> = kept.iter().map(|&i| combine(&basis.w, |j| y[(j, i)])).collect();
            let h = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(kept.len(), kept.iter().map(|&i| eig.eigenvalues[i])));
            basis = Basis { v, mv, w, h };
        }
        extend(&mut basis, new, m, op, &mut rng, &mut solves);
    }
    let converged = last.residuals.iter().take_while(|&&r| r <= tol_k).count();
    let partial = last.values.clone();
    Err((EigenError::NonConvergence { converged, requested: nev, iterations: last.iterations, partial }, last))
}

/// M-orthonormalises `block` against the basis and itself (two passes of
/// Gram–Schmidt), applies the operator and grows the projected matrix.
fn extend(basis: &mut Basis, block: Vec<Vec<f64>>, m: &SparseSymmetricMatrix, op: &EnvelopeLdl, rng: &mut ChaCha8Rng, solves: &mut usize) {
    let n = m.dim();
    for mut x in block {
        let mut accepted = false;
        for _attempt in 0..4 {
            let before = dot(&x, &m.apply(&x)).sqrt();
            for _pass in 0..2 {
                for (v, mv) in basis.v.iter().zip(&basis.mv) {
                    let c = dot(&x, mv);
                    axpy(-c, v, &mut x);
                }
            }
            let mx = m.apply(&x);
            let nrm = dot(&x, &mx).max(0.0).sqrt();
            if nrm > 1e-10 * before && nrm > 0.0 {
                let inv = 1.0 / nrm;
                x.iter_mut().for_each(|v| *v *= inv);
                let mx: Vec<f64> = mx.iter().map(|v| v * inv).collect();
                let w = op.solve(&mx);
                *solves += 1;
                let d = basis.v.len();
                basis.h = basis.h.clone().resize(d + 1, d + 1, 0.0);
                for i in 0..d {
                    let hij = dot(&basis.mv[i], &w);
                    basis.h[(i, d)] = hij;
                    basis.h[(d, i)] = hij;
                }
                basis.h[(d, d)] = dot(&mx, &w);
                basis.v.push(x);
                basis.mv.push(mx);
                basis.w.push(w);
                accepted = true;
                break;
            }
            x = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        }
        if !accepted || basis.v.len() >= n {
            break;
        }
    }
}
