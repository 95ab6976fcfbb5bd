use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PotentialError;
use crate::specfun::{bessel_pair, eval_j0_prime, eval_y0, first_bessel_zero};

/// Width of the transverse section, π√2 in scaled coordinates.
pub const SECTION_WIDTH: f64 = PI * SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    pub x: f64,
    pub v: f64,
    /// Cross product divided by the size of its two terms; 0 on the
    /// explicit branch x ≤ 0.
    pub residual: f64,
}

/// v(0) = j₀,₁² / (2π²), the minimum of the potential.
pub fn potential_minimum() -> f64 {
    let j = first_bessel_zero();
    j * j / (2.0 * PI * PI)
}

/// j₀,₁² / (x + π√2)², the Dirichlet ground state of the transverse
/// segment of length x + π√2. Equals v for x ≤ 0 and bounds it below
/// everywhere.
pub fn segment_bound(x: f64) -> f64 {
    let j = first_bessel_zero();
    j * j / ((x + SECTION_WIDTH) * (x + SECTION_WIDTH))
}

struct LogConstants {
    asymptote: f64,
}

fn log_constants() -> &'static LogConstants {
    static C: OnceLock<LogConstants> = OnceLock::new();
    C.get_or_init(|| {
        let j = first_bessel_zero();
        let y = eval_y0(j).expect("j0,1 is positive");
        let jp = eval_j0_prime(j);
        LogConstants { asymptote: j / (2.0 * PI) * y.abs() / jp.abs() }
    })
}

/// (j₀,₁/2π)·|Y₀(j₀,₁)|/|J₀′(j₀,₁)|, the coefficient of 1/|ln x| in v(x) − v(0)
/// as x → 0⁺.
pub fn log_asymptote_constant() -> f64 {
    log_constants().asymptote
}

/// Half of [`log_asymptote_constant`]: below some x₁ the potential exceeds
/// v(0) + c₀/|ln x|.
pub fn log_lower_bound_constant() -> f64 {
    0.5 * log_constants().asymptote
}

/// v(0) + C/|ln x| for 0 < x < 1.
pub fn potential_log_asymptote(x: f64) -> Result<f64, PotentialError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(PotentialError::Domain(x));
    }
    Ok(potential_minimum() + log_asymptote_constant() / x.ln().abs())
}

// J0(kx)Y0(kb) - J0(kb)Y0(kx) with b = x + π√2, its derivative in k, and
// the size of the two products.
fn cross(k: f64, x: f64) -> (f64, f64, f64) {
    let b = x + SECTION_WIDTH;
    let p = bessel_pair(k * x).expect("positive argument");
    let q = bessel_pair(k * b).expect("positive argument");
    let f = p.j0 * q.y0 - q.j0 * p.y0;
    let df = -x * p.j1 * q.y0 - b * p.j0 * q.y1 + b * q.j1 * p.y0 + x * q.j0 * p.y1;
    let scale = (p.j0 * q.y0).abs() + (q.j0 * p.y0).abs();
    (f, df, scale)
}

/// The effective potential: lowest Dirichlet eigenvalue of the radial
/// transverse operator on the section at abscissa x.
///
/// For x > 0 the section is the annulus (x, x + π√2) and v solves the
/// cross-product equation; the root is bracketed in [v(0), 1/2], bisected
/// to 1e-6 and polished by Newton steps.
pub fn effective_potential(x: f64) -> Result<PotentialSample, PotentialError> {
    if !x.is_finite() || x <= -SECTION_WIDTH {
        return Err(PotentialError::Domain(x));
    }
    if x <= 0.0 {
        return Ok(PotentialSample { x, v: segment_bound(x), residual: 0.0 });
    }
    let f = |v: f64| cross(v.sqrt(), x);
    let mut lo = potential_minimum() * (1.0 - 1e-12);
    let mut hi = 0.5 + 1e-12;
    let (flo, _, _) = f(lo);
    let (fhi, _, _) = f(hi);
    if flo == 0.0 {
        return Ok(PotentialSample { x, v: lo, residual: 0.0 });
    }
    if flo.signum() == fhi.signum() {
        return Err(PotentialError::Bracket { x, lo, hi, f_lo: flo, f_hi: fhi });
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let (fm, _, _) = f(mid);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
        } else if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut v = 0.5 * (lo + hi);
    for _ in 0..50 {
        let k = v.sqrt();
        let (fv, dk, _) = cross(k, x);
        if fv == 0.0 {
            break;
        }
        if fv.signum() == flo.signum() {
            lo = lo.max(v);
        } else {
            hi = hi.min(v);
        }
        // dF/dv = dF/dk / (2k)
        let step = fv / (dk / (2.0 * k));
        let mut next = v - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - v).abs() <= 1e-13;
        v = next;
        if done {
            break;
        }
    }
    let (fv, _, scale) = cross(v.sqrt(), x);
    Ok(PotentialSample { x, v, residual: if scale > 0.0 { fv / scale } else { fv } })
}

/// Samples of v, evaluated in parallel and kept in input order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PotentialTable {
    pub samples: Vec<PotentialSample>,
}

impl PotentialTable {
    pub fn build(xs: &[f64]) -> Result<Self, PotentialError> {
        let samples = xs.par_iter().map(|&x| effective_potential(x)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { samples })
    }

    pub fn max_residual(&self) -> f64 {
        self.samples.iter().fold(0.0, |a, s| a.max(s.residual.abs()))
    }
}

/// Largest point of a log-spaced grid in (0, 1) up to which
/// v(x) ≥ v(0) + c₀/|ln x| holds at every grid point, with c₀ from
/// [`log_lower_bound_constant`]. Returns `None` if it fails at the first
/// point.
pub fn verified_x1(points: usize) -> Result<Option<f64>, PotentialError> {
    let points = points.max(2);
    let (a, b) = (-12.0f64, (1.0f64 - 1e-6).log10());
    let xs: Vec<f64> = (0..points).map(|i| 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64)).collect();
    let table = PotentialTable::build(&xs)?;
    let v0 = potential_minimum();
    let c0 = log_lower_bound_constant();
    let mut best = None;
    for s in &table.samples {
        if s.v >= v0 + c0 / s.x.ln().abs() {
            best = Some(s.x);
        } else {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_branch() {
        assert!((effective_potential(0.0).unwrap().v - potential_minimum()).abs() < 1e-15);
        let j = first_bessel_zero();
        let s = effective_potential(PI - SECTION_WIDTH).unwrap();
        assert!((s.v - j * j / (PI * PI)).abs() < 1e-14);
        assert!(effective_potential(-SECTION_WIDTH).is_err());
    }

    #[test]
    fn implicit_branch() {
        for x in [1e-9, 1e-3, 0.5, 1.0, 10.0, 50.0] {
            let s = effective_potential(x).unwrap();
            assert!(s.residual.abs() < 1e-10, "{x} {}", s.residual);
            assert!(s.v <= 0.5 && s.v >= 0.5 - 0.25 / (x * x));
            assert!(s.v > potential_minimum());
        }
    }
}
