use std::f64::consts::PI;

/// Ai(0) = 1 / (3^{2/3} Gamma(2/3)).
pub const AIRY_AI_0: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = -1 / (3^{1/3} Gamma(1/3)).
pub const AIRY_AIP_0: f64 = -0.258_819_403_792_806_8;

const MACLAURIN_MAX: f64 = 2.0;
const ASYMPTOTIC_MIN: f64 = 9.0;
const OSCILLATORY_MIN: f64 = 12.0;
const STEP: f64 = 0.25;

pub fn airy_ai(x: f64) -> f64 {
    airy_ai_pair(x).0
}

/// (Ai(x), Ai'(x)).
pub fn airy_ai_pair(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x.abs() <= MACLAURIN_MAX {
        maclaurin(x)
    } else if x <= -OSCILLATORY_MIN {
        oscillatory(-x)
    } else if x < 0.0 {
        // The equation is stable to integrate into the oscillatory region.
        march((0.0, AIRY_AI_0, AIRY_AIP_0), x)
    } else if x >= ASYMPTOTIC_MIN {
        asymptotic(x)
    } else {
        // Ai is recessive to the right, so integrate leftwards from the
        // asymptotic regime.
        let (a, ap) = asymptotic(ASYMPTOTIC_MIN);
        march((ASYMPTOTIC_MIN, a, ap), x)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = sum t_k, g = sum u_k with t_0 = 1, u_0 = x.
    let (mut t, mut u) = (1.0, x);
    let (mut f, mut g) = (1.0, x);
    // derivatives: f' = sum 3k t_k / x, g' = sum (3k+1) u_k / x
    let (mut dt, mut du) = (0.0, 1.0);
    let (mut fp, mut gp) = (0.0, 1.0);
    for k in 1..60 {
        let k3 = 3.0 * k as f64;
        t *= x3 / ((k3 - 1.0) * k3);
        u *= x3 / (k3 * (k3 + 1.0));
        f += t;
        g += u;
        dt = if k == 1 { 0.5 * x * x } else { dt * x3 / ((k3 - 3.0) * (k3 - 1.0)) };
        du *= x3 / ((k3 - 2.0) * k3);
        fp += dt;
        gp += du;
        if t.abs() + u.abs() + dt.abs() + du.abs() < 1e-18 {
            break;
        }
    }
    let c1 = AIRY_AI_0;
    let c2 = -AIRY_AIP_0;
    (c1 * f - c2 * g, c1 * fp - c2 * gp)
}

/// Taylor-series integration of y'' = x y from `from` to `to`.
fn march(from: (f64, f64, f64), to: f64) -> (f64, f64) {
    let (mut x0, mut y, mut yp) = from;
    let n = ((to - x0).abs() / STEP).ceil().max(1.0) as usize;
    let h = (to - x0) / n as f64;
    for _ in 0..n {
        let (y1, yp1) = taylor_step(x0, y, yp, h);
        x0 += h;
        y = y1;
        yp = yp1;
    }
    (y, yp)
}

fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // a_{k+2} (k+2)(k+1) = x0 a_k + a_{k-1}
    let mut a = [y, yp, 0.5 * x0 * y];
    let mut sum = a[0] + a[1] * h + a[2] * h * h;
    let mut dsum = a[1] + 2.0 * a[2] * h;
    let mut hp = h * h;
    let scale = y.abs() + yp.abs();
    let mut small = 0;
    for k in 1..120 {
        let next = (x0 * a[1] + a[0]) / ((k + 2) as f64 * (k + 1) as f64);
        a = [a[1], a[2], next];
        hp *= h;
        let term = next * hp;
        sum += term;
        dsum += (k + 2) as f64 * next * hp / h;
        if term.abs() <= 1e-18 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (sum, dsum)
}

fn asymptotic(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let mut u = 1.0;
    let mut s = 1.0;
    let mut sp = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf) / zeta;
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        if u.abs() > prev || u.abs() < 1e-18 {
            break;
        }
        prev = u.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * u;
        sp += sign * v;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    (e / q * s, -e * q * sp)
}

/// (Ai(-z), Ai'(-z)) for large z.
fn oscillatory(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    // even/odd parts of sum (-1)^k u_k zeta^-k, split by parity of k
    let (mut pe, mut po, mut qe, mut qo) = (1.0, 0.0, 1.0, 0.0);
    let mut u = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf) / zeta;
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        if u.abs() > prev || u.abs() < 1e-18 {
            break;
        }
        prev = u.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            pe += sign * u;
            qe += sign * v;
        } else {
            po += sign * u;
            qo += sign * v;
        }
    }
    let (s, c) = (zeta - std::f64::consts::FRAC_PI_4).sin_cos();
    let amp = 1.0 / PI.sqrt();
    let q = z.powf(0.25);
    (amp / q * (c * pe + s * po), amp * q * (s * qe - c * qo))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree() {
        let (a, ap) = maclaurin(-2.0);
        let (b, bp) = march((0.0, AIRY_AI_0, AIRY_AIP_0), -2.0);
        assert!((a - b).abs() < 1e-14 && (ap - bp).abs() < 1e-14);
        let (a, ap) = maclaurin(2.0);
        let (b, bp) = march((ASYMPTOTIC_MIN, asymptotic(9.0).0, asymptotic(9.0).1), 2.0);
        assert!((a - b).abs() < 1e-14 && (ap - bp).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_matches_march() {
        let (a, ap) = oscillatory(OSCILLATORY_MIN);
        let (b, bp) = march((0.0, AIRY_AI_0, AIRY_AIP_0), -OSCILLATORY_MIN);
        assert!((a - b).abs() < 1e-13 && (ap - bp).abs() < 1e-13);
    }

    #[test]
    fn known_values() {
        assert!((airy_ai(1.0) - 0.135_292_416_312_881_4).abs() < 1e-15);
        assert!((airy_ai(-1.0) - 0.535_560_883_292_352_1).abs() < 1e-14);
    }
}
