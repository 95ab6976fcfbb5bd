use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::effective::{effective_potential, potential_minimum, SECTION_WIDTH};
use super::PotentialError;
use crate::assembly::gauss_legendre;

/// Smoothstep used for the partition of unity χ₀² + χ₁² = 1 on [1, 2].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cutoff {
    /// 6τ⁵ − 15τ⁴ + 10τ³, C² at both ends
    Quintic,
    /// 3τ² − 2τ³, C¹
    Cubic,
}

impl Cutoff {
    fn step(self, t: f64) -> (f64, f64) {
        match self {
            Cutoff::Quintic => (t * t * t * (10.0 + t * (-15.0 + 6.0 * t)), 30.0 * t * t * (1.0 - t) * (1.0 - t)),
            Cutoff::Cubic => (t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t)),
        }
    }

    /// χ₀(s) = 1 − S(s − 1): equal to 1 for s ≤ 1 and 0 for s ≥ 2.
    pub fn chi0(self, s: f64) -> f64 {
        1.0 - self.step((s - 1.0).clamp(0.0, 1.0)).0
    }

    /// W = |χ₀′|² + |χ₁′|² with χ₁ = √(1 − χ₀²), which simplifies to
    /// χ₀′² / (1 − χ₀²).
    pub fn localization_error(self, s: f64) -> f64 {
        let t = s - 1.0;
        if !(t > 0.0 && t < 1.0) {
            return 0.0;
        }
        let (st, dst) = self.step(t);
        let one_minus_sq = st * (2.0 - st);
        if one_minus_sq <= 0.0 {
            return 0.0;
        }
        dst * dst / one_minus_sq
    }
}

/// Potential of a 1D Schrödinger operator −h²∂² + V.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Potential1D {
    /// the effective potential v on (−π√2, ∞)
    BornOppenheimer,
    /// −c/x² on (1, ∞)
    InverseSquare { c: f64 },
    /// −1/(4(s sin θ + π cos θ)²) on (1, ∞): the lower model in the
    /// longitudinal variable s. With σ = (s + π cot θ)/(1 + π cot θ) it
    /// becomes (1 + π cot θ)⁻² times −∂σ² − 1/(4σ² sin²θ).
    HatQ { theta: f64 },
    /// −1/(4s² sin²θ) − W(s) on (1, ∞), W from the partition of unity.
    CheckQ { theta: f64, cutoff: Cutoff },
}

impl Potential1D {
    /// Bottom of the essential spectrum of the untruncated operator.
    pub fn threshold(&self) -> f64 {
        match self {
            Potential1D::BornOppenheimer => 0.5,
            _ => 0.0,
        }
    }

    /// Coupling c of the c/x² tail.
    pub fn coupling(&self) -> Option<f64> {
        match *self {
            Potential1D::BornOppenheimer => None,
            Potential1D::InverseSquare { c } => Some(c),
            Potential1D::HatQ { theta } | Potential1D::CheckQ { theta, .. } => Some(0.25 / theta.sin().powi(2)),
        }
    }

    // Offset between the problem variable and the radial variable x of
    // the Liouville map.
    fn radial_offset(&self) -> f64 {
        match *self {
            Potential1D::HatQ { theta } => PI / theta.tan(),
            _ => 0.0,
        }
    }

    /// V at a point of the problem variable.
    pub fn eval(&self, s: f64) -> Result<f64, PotentialError> {
        Ok(match *self {
            Potential1D::BornOppenheimer => effective_potential(s)?.v,
            Potential1D::InverseSquare { c } => -c / (s * s),
            Potential1D::HatQ { theta } => -0.25 / (s * theta.sin() + PI * theta.cos()).powi(2),
            Potential1D::CheckQ { theta, cutoff } => {
                -0.25 / (s * s * theta.sin().powi(2)) - cutoff.localization_error(s)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model1DProblem {
    pub potential: Potential1D,
    /// (a, b): Dirichlet at both ends.
    pub interval: (f64, f64),
    /// Semiclassical parameter; 1 for the model operators.
    pub h: f64,
    /// Number of grid cells of the coarse grid.
    pub grid_n: usize,
}

/// Left end of the Born–Oppenheimer grid, just right of the tip.
pub const BO_LEFT: f64 = -SECTION_WIDTH + 1e-6;

impl Model1DProblem {
    pub fn inverse_square(c: f64, right: f64, grid_n: usize) -> Self {
        Self { potential: Potential1D::InverseSquare { c }, interval: (1.0, right), h: 1.0, grid_n }
    }

    pub fn hat_q(theta: f64, right: f64, grid_n: usize) -> Self {
        Self { potential: Potential1D::HatQ { theta }, interval: (1.0, right), h: 1.0, grid_n }
    }

    pub fn check_q(theta: f64, cutoff: Cutoff, right: f64, grid_n: usize) -> Self {
        Self { potential: Potential1D::CheckQ { theta, cutoff }, interval: (1.0, right), h: 1.0, grid_n }
    }

    pub fn born_oppenheimer(h: f64, right: f64, grid_n: usize) -> Self {
        Self { potential: Potential1D::BornOppenheimer, interval: (BO_LEFT, right), h, grid_n }
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        let bad = |m: String| Err(PotentialError::Params(m));
        let (a, b) = self.interval;
        if self.grid_n < 100 {
            return bad(format!("grid_n = {} (at least 100 required)", self.grid_n));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return bad(format!("interval ({a}, {b})"));
        }
        if !(self.h > 0.0) {
            return bad(format!("h = {}", self.h));
        }
        match self.potential {
            Potential1D::BornOppenheimer => {
                if a <= -SECTION_WIDTH {
                    return bad(format!("left end {a} at or beyond the tip"));
                }
            }
            Potential1D::InverseSquare { c } => {
                if !(c >= 0.0) {
                    return bad(format!("c = {c}"));
                }
                if !(a > 0.0) {
                    return bad(format!("left end {a} must be positive"));
                }
            }
            Potential1D::HatQ { theta } | Potential1D::CheckQ { theta, .. } => {
                if !(theta > 0.0 && theta < PI / 2.0) {
                    return bad(format!("theta = {theta}"));
                }
                if !(a > 0.0) {
                    return bad(format!("left end {a} must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Smallest E for which counting below threshold − E is meaningful:
    /// the interval must span 10 decay lengths h/√E.
    pub fn resolvable_floor(&self) -> f64 {
        let len = self.interval.1 - self.interval.0;
        (10.0 * self.h / len).powi(2)
    }
}

/// Symmetric tridiagonal pencil T − λ D with D diagonal and positive.
#[derive(Debug, Clone)]
pub struct TridiagonalPencil {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub mass: Vec<f64>,
}

impl TridiagonalPencil {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below λ (Sturm count from the LDLᵀ
    /// pivots of T − λD).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut neg = 0;
        let mut p = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            p = self.diag[i] - lambda * self.mass[i] - if i > 0 { e2 / p } else { 0.0 };
            if p == 0.0 {
                p = -f64::EPSILON * (self.diag[i].abs() + lambda.abs() * self.mass[i]).max(f64::MIN_POSITIVE);
            }
            if p < 0.0 {
                neg += 1;
            }
        }
        neg
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min((self.diag[i] - r) / self.mass[i]);
            hi = hi.max((self.diag[i] + r) / self.mass[i]);
        }
        (lo, hi)
    }

    /// The k-th smallest eigenvalue (k ≥ 1) by bisection on Sturm counts.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Eigenvalues of a 1D problem on the coarse and the doubled grid and
/// their Richardson extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum1D {
    pub values: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// Fewer than the requested number of eigenvalues lie below the
    /// threshold.
    pub partial: bool,
    pub threshold: f64,
}

/// Second-order finite differences on a grid with `cells` cells.
///
/// The model operators are discretised after the Liouville map x = eᵗ,
/// ψ = e^{t/2}φ, which turns −ψ″ + Vψ = εψ into
/// −φ″ + (1/4 + x²V)φ = ε x²φ on a uniform t-grid; the inverse-square tail
/// becomes a constant. The Born–Oppenheimer operator uses a uniform
/// x-grid with cell averages of v.
pub fn discretize(problem: &Model1DProblem, cells: usize) -> Result<TridiagonalPencil, PotentialError> {
    problem.validate()?;
    match problem.potential {
        Potential1D::BornOppenheimer => born_oppenheimer_pencil(problem, cells),
        _ => Ok(liouville_pencil(problem, cells)),
    }
}

fn liouville_pencil(problem: &Model1DProblem, cells: usize) -> TridiagonalPencil {
    let off0 = problem.potential.radial_offset();
    let (ta, tb) = ((problem.interval.0 + off0).ln(), (problem.interval.1 + off0).ln());
    let dt = (tb - ta) / cells as f64;
    let inv = 1.0 / (dt * dt);
    let n = cells - 1;
    let mut diag = Vec::with_capacity(n);
    let mut mass = Vec::with_capacity(n);
    for i in 1..cells {
        let x = (ta + dt * i as f64).exp();
        let q = match problem.potential {
            Potential1D::InverseSquare { c } => 0.25 - c,
            Potential1D::HatQ { theta } => 0.25 - 0.25 / theta.sin().powi(2),
            Potential1D::CheckQ { theta, cutoff } => {
                0.25 - 0.25 / theta.sin().powi(2) - x * x * cutoff.localization_error(x)
            }
            Potential1D::BornOppenheimer => unreachable!(),
        };
        diag.push(2.0 * inv + q);
        mass.push(x * x);
    }
    TridiagonalPencil { diag, off: vec![-inv; n.saturating_sub(1)], mass }
}

// Mean of v over [l, r]: closed form where x ≤ 0, Gauss–Legendre on
// geometrically shrinking pieces towards 0⁺ where v has a 1/|ln x| cusp.
fn cell_average_points(l: f64, r: f64, nodes: &[f64], weights: &[f64]) -> (f64, Vec<(f64, f64)>) {
    let j = crate::specfun::first_bessel_zero();
    let a = SECTION_WIDTH;
    let mut exact = 0.0;
    let mut pts = Vec::new();
    let neg_r = r.min(0.0);
    if l < neg_r {
        exact += j * j * (1.0 / (l + a) - 1.0 / (neg_r + a));
    }
    let pos_l = l.max(0.0);
    if r > pos_l {
        let mut pieces = Vec::new();
        if pos_l == 0.0 {
            let mut hi = r;
            for _ in 0..40 {
                pieces.push((0.5 * hi, hi));
                hi *= 0.5;
            }
            // v is within C/|ln x| of v(0) on the remaining sliver
            exact += hi * potential_minimum();
        } else {
            pieces.push((pos_l, r));
        }
        for (p, q) in pieces {
            let (c, hw) = (0.5 * (p + q), 0.5 * (q - p));
            for (x, w) in nodes.iter().zip(weights) {
                pts.push((c + hw * x, w * hw));
            }
        }
    }
    (exact, pts)
}

fn born_oppenheimer_pencil(problem: &Model1DProblem, cells: usize) -> Result<TridiagonalPencil, PotentialError> {
    let (a, b) = problem.interval;
    let dx = (b - a) / cells as f64;
    let h2 = problem.h * problem.h;
    let (gx, gw) = gauss_legendre(5);
    let mut exacts = Vec::with_capacity(cells - 1);
    let mut points = Vec::new();
    let mut owner = Vec::new();
    for i in 1..cells {
        let x = a + dx * i as f64;
        let (ex, pts) = cell_average_points(x - 0.5 * dx, x + 0.5 * dx, &gx, &gw);
        exacts.push(ex);
        for p in pts {
            points.push(p);
            owner.push(i - 1);
        }
    }
    let values: Vec<f64> =
        points.par_iter().map(|&(x, w)| effective_potential(x).map(|s| s.v * w)).collect::<Result<_, _>>()?;
    let mut integral = exacts;
    for (v, &o) in values.iter().zip(&owner) {
        integral[o] += v;
    }
    let inv = h2 / (dx * dx);
    let diag = integral.iter().map(|s| 2.0 * inv + s / dx).collect::<Vec<_>>();
    let n = diag.len();
    Ok(TridiagonalPencil { diag, off: vec![-inv; n.saturating_sub(1)], mass: vec![1.0; n] })
}

/// The k lowest eigenvalues below the threshold, Richardson-extrapolated
/// from grids with `grid_n` and `2 grid_n` cells. When fewer than k lie
/// below the threshold on either grid, the available ones are returned
/// and `partial` is set.
pub fn solve_1d(problem: &Model1DProblem, k: usize) -> Result<Spectrum1D, PotentialError> {
    if k == 0 {
        return Err(PotentialError::Params("k = 0".into()));
    }
    let coarse_p = discretize(problem, problem.grid_n)?;
    let fine_p = discretize(problem, 2 * problem.grid_n)?;
    let threshold = problem.potential.threshold();
    let avail = coarse_p.count_below(threshold).min(fine_p.count_below(threshold));
    let kk = k.min(avail);
    let (coarse, fine): (Vec<f64>, Vec<f64>) =
        (1..=kk).into_par_iter().map(|i| (coarse_p.eigenvalue(i), fine_p.eigenvalue(i))).unzip();
    let values = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
    Ok(Spectrum1D { values, coarse, fine, partial: kk < k, threshold })
}

/// Number of eigenvalues below threshold − E on the doubled grid.
pub fn count_below(problem: &Model1DProblem, e: f64) -> Result<usize, PotentialError> {
    if !(e > 0.0) {
        return Err(PotentialError::Params(format!("E = {e} must be positive")));
    }
    let floor = problem.resolvable_floor();
    if e < floor {
        return Err(PotentialError::BelowFloor { e, floor });
    }
    let p = discretize(problem, 2 * problem.grid_n)?;
    Ok(p.count_below(problem.potential.threshold() - e))
}

/// All eigenvalues below threshold − `e_min` on the doubled grid, in
/// increasing order, as distances E_j = threshold − ε_j.
pub fn threshold_distances(problem: &Model1DProblem, e_min: f64) -> Result<Vec<f64>, PotentialError> {
    let n = count_below(problem, e_min)?;
    let p = discretize(problem, 2 * problem.grid_n)?;
    let thr = problem.potential.threshold();
    Ok((1..=n).into_par_iter().map(|i| thr - p.eigenvalue(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_box() {
        let p = Model1DProblem::inverse_square(0.0, 4.0, 400);
        let s = solve_1d(&p, 3).unwrap();
        for (i, v) in s.values.iter().enumerate() {
            let n = (i + 1) as f64;
            let exact = PI * PI * n * n / 9.0;
            assert!((v - exact).abs() < 1e-7 * exact, "{v} {exact}");
        }
    }

    #[test]
    fn partition_of_unity() {
        for cut in [Cutoff::Quintic, Cutoff::Cubic] {
            assert_eq!(cut.chi0(0.5), 1.0);
            assert_eq!(cut.chi0(2.5), 0.0);
            for i in 1..100 {
                let s = 1.0 + i as f64 / 100.0;
                let w = cut.localization_error(s);
                // W from finite differences of χ₀ and χ₁ = √(1 − χ₀²)
                let d = 1e-6;
                let c0 = |x: f64| cut.chi0(x);
                let c1 = |x: f64| (1.0 - cut.chi0(x).powi(2)).max(0.0).sqrt();
                let d0 = (c0(s + d) - c0(s - d)) / (2.0 * d);
                let d1 = (c1(s + d) - c1(s - d)) / (2.0 * d);
                assert!((w - d0 * d0 - d1 * d1).abs() < 1e-5 * (1.0 + w), "{s} {w}");
            }
        }
    }

    #[test]
    fn floor_is_enforced() {
        let p = Model1DProblem::inverse_square(1.0, 1001.0, 200);
        assert!(matches!(count_below(&p, 1e-5), Err(PotentialError::BelowFloor { .. })));
        assert!(count_below(&p, 1e-3).is_ok());
    }
}
