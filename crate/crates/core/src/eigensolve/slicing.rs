use serde::{Deserialize, Serialize};

use crate::assembly::SparseSymmetricMatrix;

use super::krylov::Target;
use super::{EigenError, EigenResult, Pencil, SolveMeta, SolverOptions};

/// How intervals are bisected while slicing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SliceScale {
    Linear,
    /// Bisect in ln(t - λ); suited to eigenvalues accumulating below t.
    LogBelow(f64),
}

impl SliceScale {
    fn split(self, a: f64, b: f64) -> f64 {
        match self {
            SliceScale::Linear => 0.5 * (a + b),
            SliceScale::LogBelow(t) if b < t => t - ((t - a) * (t - b)).sqrt(),
            SliceScale::LogBelow(_) => 0.5 * (a + b),
        }
    }
}

/// Number of eigenvalues of K x = λ M x strictly below `sigma`.
pub fn count_below(k: &SparseSymmetricMatrix, m: &SparseSymmetricMatrix, sigma: f64) -> Result<usize, EigenError> {
    Pencil::new(k, m)?.count_below(sigma)
}

/// All eigenpairs with `lo <= λ < hi`. The interval is bisected, with
/// inertia counts, until each piece holds at most `max_per_slice`
/// eigenvalues; each piece is then solved by shift-invert about its centre,
/// where exactly its own eigenvalues are the nearest ones.
pub fn eigenpairs_in_interval(
    pencil: &Pencil,
    lo: f64,
    hi: f64,
    max_per_slice: usize,
    scale: SliceScale,
    opts: &SolverOptions,
) -> Result<EigenResult, EigenError> {
    if !(lo < hi) || max_per_slice == 0 {
        return Err(EigenError::Request(format!("interval [{lo}, {hi}) with slices of {max_per_slice}")));
    }
    let mut meta = SolveMeta { shift: f64::NAN, seed: opts.seed, residual_floor: pencil.residual_floor(), ..SolveMeta::default() };
    let c_lo = pencil.count_below(lo)?;
    let c_hi = pencil.count_below(hi)?;
    meta.factorizations += 2;
    let mut stack = vec![(lo, hi, c_lo, c_hi)];
    let mut out = EigenResult { values: Vec::new(), vectors: Vec::new(), residuals: Vec::new(), meta: SolveMeta::default() };
    while let Some((a, b, ca, cb)) = stack.pop() {
        let count = cb.saturating_sub(ca);
        if count == 0 {
            continue;
        }
        if count > max_per_slice && (b - a) > 1e-14 * b.abs().max(1.0) {
            let mid = scale.split(a, b);
            let cm = pencil.count_below(mid)?;
            meta.factorizations += 1;
            stack.push((mid, b, cm, cb));
            stack.push((a, mid, ca, cm));
            continue;
        }
        let sigma = 0.5 * (a + b);
        let f = pencil.factor_shifted(sigma)?;
        meta.factorizations += 1;
        let r = pencil.run(&f, sigma, count, Target::Nearest, opts)?;
        meta.iterations += r.meta.iterations;
        meta.restarts += r.meta.restarts;
        meta.solves += r.meta.solves;
        for ((v, x), res) in r.values.into_iter().zip(r.vectors).zip(r.residuals) {
            let slack = opts.tol.max(pencil.residual_floor());
            if v < a - slack || v >= b + slack {
                return Err(EigenError::Request(format!("slice [{a}, {b}) returned {v} outside the slice")));
            }
            out.values.push(v);
            out.vectors.push(x);
            out.residuals.push(res);
        }
    }
    out.meta = meta;
    out.sort();
    Ok(out)
}
