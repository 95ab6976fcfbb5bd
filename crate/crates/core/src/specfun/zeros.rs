use std::sync::OnceLock;

use super::{airy_ai_pair, eval_j0, eval_j1, SpecfunError};

/// Number of zeros tabulated for each function.
pub const ZERO_TABLE_CAPACITY: usize = 64;

/// k-th positive zero of J0, k = 1, 2, ...
pub fn bessel_j0_zero(k: usize) -> Result<f64, SpecfunError> {
    lookup(j0_table(), k)
}

/// k-th zero of Ai, returned as the positive number z with Ai(-z) = 0.
pub fn airy_zero(k: usize) -> Result<f64, SpecfunError> {
    lookup(airy_table(), k)
}

/// The first zero of J0, which sets the transverse ground-state energy.
pub fn first_bessel_zero() -> f64 {
    j0_table()[0]
}

fn lookup(table: &[f64], k: usize) -> Result<f64, SpecfunError> {
    if k == 0 || k > table.len() {
        return Err(SpecfunError::Capacity { index: k, capacity: table.len() });
    }
    Ok(table[k - 1])
}

fn j0_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let f = |x: f64| (eval_j0(x), -eval_j1(x));
        scan_zeros(f, 0.5, 0.25, ZERO_TABLE_CAPACITY)
    })
}

fn airy_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let f = |z: f64| {
            let (a, ap) = airy_ai_pair(-z);
            (a, -ap)
        };
        scan_zeros(f, 0.5, 0.05, ZERO_TABLE_CAPACITY)
    })
}

/// Scans with step `dx` for sign changes, then bisects and polishes with
/// Newton steps kept inside the bracket. `f` returns (value, derivative).
fn scan_zeros(f: impl Fn(f64) -> (f64, f64), start: f64, dx: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a).0;
    while out.len() < count {
        let b = a + dx;
        let fb = f(b).0;
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            out.push(refine(&f, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    out
}

fn refine(f: &impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid).0;
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let (v, d) = f(x);
        if v == 0.0 || d == 0.0 {
            break;
        }
        let next = x - v / d;
        if !(next > lo && next < hi) {
            break;
        }
        let done = (next - x).abs() <= 1e-16 * x.abs();
        x = next;
        if done {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_is_enforced() {
        assert!(bessel_j0_zero(0).is_err());
        assert!(matches!(airy_zero(65), Err(SpecfunError::Capacity { index: 65, .. })));
        assert!(bessel_j0_zero(64).is_ok());
    }

    #[test]
    fn first_zeros() {
        assert!((first_bessel_zero() - 2.404_825_557_695_773).abs() < 1e-14);
        assert!((airy_zero(1).unwrap() - 2.338_107_410_459_767).abs() < 1e-13);
    }
}
