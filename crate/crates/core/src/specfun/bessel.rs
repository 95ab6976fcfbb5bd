use std::f64::consts::{FRAC_2_PI, FRAC_PI_4, PI};

use super::{SpecfunError, EULER_GAMMA};

/// J0, J1, Y0, Y1 evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

// Below SERIES_MAX the ascending series is used, above HANKEL_MIN the
// asymptotic expansion; in between, Miller's backward recurrence.
const SERIES_MAX: f64 = 2.0;
const HANKEL_MIN: f64 = 25.0;

pub fn eval_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_MAX {
        series_j(x).0
    } else if x < HANKEL_MIN {
        miller(x).0
    } else {
        hankel(x).0
    }
}

pub fn eval_j1(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let v = if x < SERIES_MAX {
        series_j(x).1
    } else if x < HANKEL_MIN {
        miller(x).1
    } else {
        hankel(x).1
    };
    sign * v
}

/// Derivative of J0, equal to -J1.
pub fn eval_j0_prime(x: f64) -> f64 {
    -eval_j1(x)
}

pub fn eval_y0(x: f64) -> Result<f64, SpecfunError> {
    Ok(bessel_pair(x)?.y0)
}

pub fn eval_y1(x: f64) -> Result<f64, SpecfunError> {
    Ok(bessel_pair(x)?.y1)
}

/// All four functions at a positive argument, sharing one recurrence.
pub fn bessel_pair(x: f64) -> Result<BesselPair, SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain(x));
    }
    let (j0, j1, y0, y1) = if x < SERIES_MAX {
        let (j0, j1) = series_j(x);
        let (y0, y1) = series_y(x, j0, j1);
        (j0, j1, y0, y1)
    } else if x < HANKEL_MIN {
        miller(x)
    } else {
        hankel(x)
    };
    Ok(BesselPair { j0, j1, y0, y1 })
}

fn series_j(x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let (mut t0, mut t1) = (1.0, 1.0);
    let (mut s0, mut s1) = (1.0, 1.0);
    for k in 1..40 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        s0 += t0;
        s1 += t1;
        if t0.abs() < 1e-18 * s0.abs() && t1.abs() < 1e-18 * s1.abs() {
            break;
        }
    }
    (s0, 0.5 * x * s1)
}

fn series_y(x: f64, j0: f64, j1: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let lg = (0.5 * x).ln() + EULER_GAMMA;

    // Y0: sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
    let mut t = 1.0;
    let mut harmonic = 0.0;
    let mut s0 = 0.0;
    for k in 1..40 {
        let kf = k as f64;
        t *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        let term = -t * harmonic;
        s0 += term;
        if term.abs() < 1e-18 * s0.abs() {
            break;
        }
    }
    let y0 = FRAC_2_PI * (lg * j0 + s0);

    // Y1: psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
    let mut t = 1.0;
    let mut harmonic = 0.0;
    let mut s1 = 0.0;
    for k in 0..40 {
        let kf = k as f64;
        if k > 0 {
            t *= -q / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
        }
        let term = t * (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA);
        s1 += term;
        if k > 2 && term.abs() < 1e-18 * s1.abs() {
            break;
        }
    }
    let y1 = -FRAC_2_PI / x + FRAC_2_PI * (0.5 * x).ln() * j1 - 0.5 * x * s1 / PI;
    (y0, y1)
}

/// Backward recurrence normalised by J0 + 2 sum J_2k = 1, with the Neumann
/// series for Y0 and its derivative for Y1.
fn miller(x: f64) -> (f64, f64, f64, f64) {
    let start = 2 * (((x + 60.0) / 2.0) as usize);
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-30;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = j[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * j[k];
    }
    for v in j.iter_mut() {
        *v /= norm;
    }
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 1..=start / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kf;
    }
    let y0 = FRAC_2_PI * (lg * j[0] - 2.0 * s0);
    let y1 = FRAC_2_PI * (-j[0] / x + lg * j[1] + s1);
    (j[0], j[1], y0, y1)
}

/// Hankel's expansion; P and Q summed until terms stop decreasing.
fn pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn hankel(x: f64) -> (f64, f64, f64, f64) {
    let amp = (FRAC_2_PI / x).sqrt();
    let (p0, q0) = pq(0.0, x);
    let (p1, q1) = pq(1.0, x);
    let (s0, c0) = (x - FRAC_PI_4).sin_cos();
    let (s1, c1) = (x - 3.0 * FRAC_PI_4).sin_cos();
    (
        amp * (p0 * c0 - q0 * s0),
        amp * (p1 * c1 - q1 * s1),
        amp * (p0 * s0 + q0 * c0),
        amp * (p1 * s1 + q1 * c1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree_at_crossovers() {
        for &x in &[SERIES_MAX, HANKEL_MIN] {
            let a = if x == SERIES_MAX { let (j0, j1) = series_j(x); let (y0, y1) = series_y(x, j0, j1); (j0, j1, y0, y1) } else { hankel(x) };
            let b = miller(x);
            assert!((a.0 - b.0).abs() < 1e-14, "{x}");
            assert!((a.1 - b.1).abs() < 1e-14, "{x}");
            assert!((a.2 - b.2).abs() < 1e-14, "{x}");
            assert!((a.3 - b.3).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn known_values() {
        assert!((eval_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((eval_y0(1.0).unwrap() - 0.088_256_964_215_676_96).abs() < 1e-15);
        assert!((eval_j1(10.0) - 0.043_472_746_168_861_44).abs() < 1e-14);
        assert!(eval_y0(0.0).is_err());
        assert!(eval_y1(-1.0).is_err());
    }
}
