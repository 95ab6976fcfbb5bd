use std::f64::consts::PI;

use conilay::experiments::oracles::{airy_zeros_oracle, bessel_zeros_oracle, specfun_digest};
use conilay::specfun::*;

// Maclaurin series of J0, fine for |x| <= 12 in double precision.
fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..120 {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

// Ai from its two Maclaurin series f, g: Ai = c1 f - c2 g.
fn airy_series(x: f64) -> f64 {
    let (c1, c2) = (0.355_028_053_887_817_2, 0.258_819_403_792_806_8);
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
    }
    c1 * f - c2 * g
}

#[test]
fn j0_against_series() {
    for i in 0..=60 {
        let x = 0.2 * i as f64;
        assert!((eval_j0(x) - j0_series(x)).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn airy_against_series() {
    for i in 0..=40 {
        let x = -6.0 + 0.2 * i as f64;
        assert!((airy_ai(x) - airy_series(x)).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn frozen_values() {
    // reference digits from standard tables
    assert!((first_bessel_zero() - 2.404_825_557_695_773).abs() < 1e-14);
    assert!((bessel_j0_zero(2).unwrap() - 5.520_078_110_286_311).abs() < 1e-13);
    assert!((airy_zero(1).unwrap() - 2.338_107_410_459_767).abs() < 1e-13);
    assert!((airy_zero(2).unwrap() - 4.087_949_444_130_971).abs() < 1e-13);
    assert!((airy_ai(1.0) - 0.135_292_416_312_881_4).abs() < 1e-14);
    assert!((eval_y0(1.0).unwrap() - 0.088_256_964_215_676_96).abs() < 1e-14);
    assert!((eval_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
    assert!((eval_y1(1.0).unwrap() + 0.781_212_821_300_288_7).abs() < 1e-14);
}

#[test]
fn zeros_against_bisection() {
    for (k, z) in bessel_zeros_oracle(20).into_iter().enumerate() {
        assert!((bessel_j0_zero(k + 1).unwrap() - z).abs() < 1e-12);
    }
    for (k, z) in airy_zeros_oracle(10).into_iter().enumerate() {
        assert!((airy_zero(k + 1).unwrap() - z).abs() < 1e-9);
    }
}

#[test]
fn y0_rejects_nonpositive() {
    assert!(eval_y0(0.0).is_err());
    assert!(eval_y1(-1.0).is_err());
    assert!(bessel_j0_zero(0).is_err());
}

#[test]
fn wronskian_and_digest() {
    for i in 1..=100 {
        let x = 0.37 * i as f64;
        let p = bessel_pair(x).unwrap();
        assert!((p.j1 * p.y0 - p.j0 * p.y1 - 2.0 / (PI * x)).abs() < 1e-13, "x = {x}");
    }
    let d = specfun_digest(10);
    for e in [d.j0_max_error, d.y0_max_error, d.ai_max_error, d.bessel_zero_max_error, d.wronskian_max_error] {
        assert!(e < 1e-10, "{d:?}");
    }
}
