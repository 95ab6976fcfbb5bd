//! Slow, independent evaluations of the special functions used to audit
//! `specfun`: Bessel's integral with the trapezoidal rule, the ascending
//! series, classical Runge–Kutta integration of the defining equations and
//! plain bisection for zeros.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::specfun::{airy_ai, airy_zero, bessel_j0_zero, bessel_pair, eval_j0, eval_y0, EULER_GAMMA};

const RK_STEP: f64 = 1e-4;

/// J_n(x) = (1/2π)∫₀^{2π} cos(nt − x sin t) dt for n = 0, 1. The integrand is
/// periodic and analytic, so the trapezoidal rule converges geometrically.
pub fn bessel_j_integral(n: u32, x: f64) -> f64 {
    let m = 2 * (x.abs() as usize) + 96;
    let h = 2.0 * PI / m as f64;
    (0..m).map(|i| (n as f64 * i as f64 * h - x * (i as f64 * h).sin()).cos()).sum::<f64>() / m as f64
}

/// (Y₀, Y₀') from the ascending series, for 0 < x ≤ 8.
pub fn y0_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let (mut j0, mut dj0) = (1.0, 0.0);
    let (mut s, mut ds) = (0.0, 0.0);
    let mut term = 1.0;
    let mut harmonic = 0.0;
    for k in 1..80 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        dj0 += 2.0 * kf * term / x;
        s -= harmonic * term;
        ds -= harmonic * 2.0 * kf * term / x;
        if term.abs() < 1e-20 {
            break;
        }
    }
    let l = (0.5 * x).ln() + EULER_GAMMA;
    (2.0 / PI * (l * j0 + s), 2.0 / PI * (j0 / x + l * dj0 + ds))
}

/// Classical RK4 for y'' = f(x, y, y') from x0 to x1 with steps ≤ `RK_STEP`.
fn rk4(f: impl Fn(f64, f64, f64) -> f64, x0: f64, y: f64, yp: f64, x1: f64) -> (f64, f64) {
    let n = ((x1 - x0).abs() / RK_STEP).ceil().max(1.0) as usize;
    let h = (x1 - x0) / n as f64;
    let (mut y, mut v) = (y, yp);
    for i in 0..n {
        let x = x0 + i as f64 * h;
        let k1 = (v, f(x, y, v));
        let k2 = (v + 0.5 * h * k1.1, f(x + 0.5 * h, y + 0.5 * h * k1.0, v + 0.5 * h * k1.1));
        let k3 = (v + 0.5 * h * k2.1, f(x + 0.5 * h, y + 0.5 * h * k2.0, v + 0.5 * h * k2.1));
        let k4 = (v + h * k3.1, f(x + h, y + h * k3.0, v + h * k3.1));
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    (y, v)
}

/// Y₀(x) for x > 0: the series up to 8, then the Bessel equation integrated
/// outward from 8.
pub fn y0_oracle(x: f64) -> f64 {
    if x <= 8.0 {
        y0_series(x).0
    } else {
        let (y, yp) = y0_series(8.0);
        rk4(|t, y, v| -v / t - y, 8.0, y, yp, x).0
    }
}

/// (Ai(0), Ai'(0)) from the Gamma function.
pub fn airy_initial() -> (f64, f64) {
    (1.0 / (3f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0)), -1.0 / (3f64.powf(1.0 / 3.0) * gamma(1.0 / 3.0)))
}

/// (Ai, Ai') at x ∈ [−20, 3] by integrating y'' = xy from 0.
pub fn airy_oracle(x: f64) -> (f64, f64) {
    let (a, ap) = airy_initial();
    rk4(|t, y, _| t * y, 0.0, a, ap, x)
}

/// First `count` positive zeros of J₀ by bisection on the integral form.
pub fn bessel_zeros_oracle(count: usize) -> Vec<f64> {
    let f = |x: f64| bessel_j_integral(0, x);
    let mut out = Vec::with_capacity(count);
    let mut a = 0.5;
    let mut fa = f(a);
    while out.len() < count {
        let b = a + 0.25;
        let fb = f(b);
        if fa * fb <= 0.0 {
            out.push(bisect(&f, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    out
}

/// First `count` zeros z of Ai(−z), z > 0.
pub fn airy_zeros_oracle(count: usize) -> Vec<f64> {
    let (mut a, mut ap) = airy_initial();
    let mut x = 0.0;
    let dx = 0.05;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (b, bp) = rk4(|t, y, _| t * y, x, a, ap, x - dx);
        if a * b <= 0.0 {
            let state = (x, a, ap);
            let g = |t: f64| rk4(|s, y, _| s * y, state.0, state.1, state.2, -t).0;
            out.push(bisect(&g, -x, -(x - dx), a));
        }
        x -= dx;
        a = b;
        ap = bp;
    }
    out
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let s = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest deviations between `specfun` and the oracles above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecfunDigest {
    pub j0_max_error: f64,
    pub y0_max_error: f64,
    pub ai_max_error: f64,
    pub bessel_zero_max_error: f64,
    pub airy_zero_max_error: f64,
    /// max |J₁Y₀ − J₀Y₁ − 2/(πx)| on [0.1, 50].
    pub wronskian_max_error: f64,
    pub zeros_checked: usize,
}

pub fn specfun_digest(zeros: usize) -> SpecfunDigest {
    let mut d = SpecfunDigest {
        j0_max_error: 0.0,
        y0_max_error: 0.0,
        ai_max_error: 0.0,
        bessel_zero_max_error: 0.0,
        airy_zero_max_error: 0.0,
        wronskian_max_error: 0.0,
        zeros_checked: zeros,
    };
    for i in 1..=200 {
        let x = 0.2 * i as f64;
        d.j0_max_error = d.j0_max_error.max((eval_j0(x) - bessel_j_integral(0, x)).abs());
    }
    for i in 1..=60 {
        let x = 0.5 * i as f64;
        if let Ok(y) = eval_y0(x) {
            d.y0_max_error = d.y0_max_error.max((y - y0_oracle(x)).abs());
        }
    }
    for i in 0..=40 {
        let x = -16.0 + 0.475 * i as f64;
        d.ai_max_error = d.ai_max_error.max((airy_ai(x) - airy_oracle(x).0).abs());
    }
    for (k, z) in bessel_zeros_oracle(zeros).into_iter().enumerate() {
        let e = bessel_j0_zero(k + 1).map(|v| (v - z).abs()).unwrap_or(f64::INFINITY);
        d.bessel_zero_max_error = d.bessel_zero_max_error.max(e);
    }
    for (k, z) in airy_zeros_oracle(zeros).into_iter().enumerate() {
        let e = airy_zero(k + 1).map(|v| (v - z).abs()).unwrap_or(f64::INFINITY);
        d.airy_zero_max_error = d.airy_zero_max_error.max(e);
    }
    for i in 0..=499 {
        let x = 0.1 + 0.1 * i as f64;
        let w = bessel_pair(x).map(|p| (p.j1 * p.y0 - p.j0 * p.y1 - 2.0 / (PI * x)).abs()).unwrap_or(f64::INFINITY);
        d.wronskian_max_error = d.wronskian_max_error.max(w);
    }
    d
}
