use std::f64::consts::PI;

use conilay::potential1d::*;

// Lowest eigenvalue of -(1/y)(y u')' on (a, b), Dirichlet at both ends,
// by a conservative three-point scheme, Sturm bisection and Richardson.
fn radial_fd(a: f64, b: f64) -> f64 {
    let lowest = |n: usize| {
        let h = (b - a) / n as f64;
        let y = |i: f64| a + i * h;
        let diag: Vec<f64> = (1..n).map(|i| (y(i as f64 - 0.5) + y(i as f64 + 0.5)) / (h * h * y(i as f64))).collect();
        let off: Vec<f64> = (1..n - 1)
            .map(|i| y(i as f64 + 0.5) / (h * h * (y(i as f64) * y(i as f64 + 1.0)).sqrt()))
            .collect();
        let count = |lam: f64| {
            let mut d = 1.0;
            let mut neg = 0;
            for i in 0..diag.len() {
                let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
                d = diag[i] - lam - if i == 0 { 0.0 } else { e2 / d };
                if d == 0.0 {
                    d = 1e-300;
                }
                if d < 0.0 {
                    neg += 1;
                }
            }
            neg
        };
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if count(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let (c, f) = (lowest(2000), lowest(4000));
    (4.0 * f - c) / 3.0
}

#[test]
fn annulus_against_finite_differences() {
    for x in [0.05, 0.3, 1.0, 4.0] {
        let v = effective_potential(x).unwrap().v;
        let fd = radial_fd(x, x + SECTION_WIDTH);
        assert!((v - fd).abs() < 1e-8, "x = {x}: {v} vs {fd}");
    }
}

#[test]
fn disk_branch_is_the_segment_bound() {
    let j = conilay::specfun::first_bessel_zero();
    for x in [-4.0, -2.0, -0.5, 0.0] {
        let v = effective_potential(x).unwrap().v;
        assert!((v - j * j / (x + SECTION_WIDTH).powi(2)).abs() < 1e-15);
    }
    assert!((potential_minimum() - j * j / (2.0 * PI * PI)).abs() < 1e-15);
}

#[test]
fn log_asymptote_near_zero() {
    // the approach to v(0) is logarithmic; the ratio tends to 1 slowly
    let v0 = potential_minimum();
    let ratio = |x: f64| (effective_potential(x).unwrap().v - v0) / (potential_log_asymptote(x).unwrap() - v0);
    let (r1, r2) = (ratio(1e-6), ratio(1e-12));
    assert!((r2 - 1.0).abs() < (r1 - 1.0).abs());
    assert!((r2 - 1.0).abs() < 0.06, "{r2}");
    assert!(potential_log_asymptote(1.5).is_err());
    assert!(effective_potential(-SECTION_WIDTH).is_err());
}

// Number of eigenvalues below -E of -d²/dx² - c/x² on (1, R), Dirichlet,
// from the Prüfer angle of the Liouville-transformed equation
// φ'' = (1/4 - c + E e^{2t}) φ on (0, ln R). Integration stops once q is
// large: deep in the forbidden region the angle no longer crosses kπ.
fn pruefer_count(c: f64, right: f64, e: f64) -> usize {
    let t_end = right.ln();
    let n = (t_end / 2e-4).ceil() as usize;
    let dt = t_end / n as f64;
    let rhs = |t: f64, th: f64| {
        let q = 0.25 - c + e * (2.0 * t).exp();
        th.cos().powi(2) - q * th.sin().powi(2)
    };
    let mut th = 0.0;
    for i in 0..n {
        let t = i as f64 * dt;
        if 0.25 - c + e * (2.0 * t).exp() > 1e4 {
            break;
        }
        let k1 = rhs(t, th);
        let k2 = rhs(t + 0.5 * dt, th + 0.5 * dt * k1);
        let k3 = rhs(t + 0.5 * dt, th + 0.5 * dt * k2);
        let k4 = rhs(t + dt, th + dt * k3);
        th += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    (th / PI).floor() as usize
}

#[test]
fn count_below_against_pruefer() {
    let c = 0.25 / 5f64.to_radians().sin().powi(2);
    let problem = Model1DProblem::inverse_square(c, 1e6, 4000);
    for e in [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8] {
        let got = count_below(&problem, e).unwrap();
        let want = pruefer_count(c, 1e6, e);
        // no eigenvalue within 2% of -E: the counts must agree exactly
        if pruefer_count(c, 1e6, 0.98 * e) == pruefer_count(c, 1e6, 1.02 * e) {
            assert_eq!(got, want, "E = {e}");
        } else {
            assert!(got.abs_diff(want) <= 1, "E = {e}: {got} vs {want}");
        }
    }
    let weak = Model1DProblem::inverse_square(1.0, 1e6, 4000);
    let got = count_below(&weak, 1e-8).unwrap();
    let want = pruefer_count(1.0, 1e6, 1e-8);
    assert!(got.abs_diff(want) <= 1, "{got} vs {want}");
}

#[test]
fn count_below_floor() {
    let p = Model1DProblem::inverse_square(1.0, 100.0, 200);
    assert!(count_below(&p, 1e-6).is_err());
    assert!(count_below(&p, -1.0).is_err());
}

#[test]
fn hat_q_is_a_rescaled_inverse_square() {
    let theta = 10f64.to_radians();
    let k = 1.0 + PI / theta.tan();
    let right = 400.0;
    let hat = solve_1d(&Model1DProblem::hat_q(theta, right, 3000), 3).unwrap();
    let inv = solve_1d(
        &Model1DProblem::inverse_square(0.25 / theta.sin().powi(2), (right + PI / theta.tan()) / k, 3000),
        3,
    )
    .unwrap();
    assert_eq!(hat.values.len(), inv.values.len());
    for (a, b) in hat.values.iter().zip(&inv.values) {
        assert!((a * k * k - b).abs() < 1e-6 * b.abs().max(1.0), "{a} {b}");
    }
}

#[test]
fn born_oppenheimer_levels() {
    let v0 = potential_minimum();
    let mut last = 0.0;
    for h in [0.2, 0.1, 0.05] {
        let s = solve_1d(&Model1DProblem::born_oppenheimer(h, 15.0, 2000), 2).unwrap();
        assert!(!s.partial);
        assert!(s.values[0] > v0 && s.values[1] < 0.5 && s.values[0] < s.values[1]);
        if h < 0.2 {
            assert!(s.values[0] < last);
        }
        last = s.values[0];
    }
}
