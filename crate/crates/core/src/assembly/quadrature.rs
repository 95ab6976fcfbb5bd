/// Quadrature on a triangle in barycentric coordinates; weights sum to 1
/// and are multiplied by the triangle area.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl TriangleRule {
    /// Seven-point rule exact for polynomials of degree 5.
    pub fn degree5() -> Self {
        let r = 15f64.sqrt();
        let a1 = (6.0 - r) / 21.0;
        let a2 = (6.0 + r) / 21.0;
        let w1 = (155.0 - r) / 1200.0;
        let w2 = (155.0 + r) / 1200.0;
        let mut points = vec![[1.0 / 3.0; 3]];
        let mut weights = vec![9.0 / 40.0];
        for (a, w) in [(a1, w1), (a2, w2)] {
            let b = 1.0 - 2.0 * a;
            points.extend([[b, a, a], [a, b, a], [a, a, b]]);
            weights.extend([w; 3]);
        }
        Self { points, weights }
    }

    /// Collapsed Gauss–Legendre product rule with n^2 points, exact for
    /// degree 2n - 2.
    pub fn collapsed(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            let a = 0.5 * (x[i] + 1.0);
            for j in 0..n {
                let b = 0.5 * (x[j] + 1.0);
                // (a, b) in the unit square -> (l1, l2) = (a (1 - b), b)
                let l1 = a * (1.0 - b);
                let l2 = b;
                points.push([1.0 - l1 - l2, l1, l2]);
                // area of the reference triangle is 1/2; Jacobian (1 - b)/4
                weights.push(w[i] * w[j] * (1.0 - b) * 0.25 * 2.0);
            }
        }
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    // exact integral of l1^a l2^b over the reference triangle divided by its area:
    // 2 a! b! / (a + b + 2)!
    fn exact(a: u32, b: u32) -> f64 {
        let f = |n: u32| (1..=n).map(f64::from).product::<f64>();
        2.0 * f(a) * f(b) / f(a + b + 2)
    }

    #[test]
    fn rules_integrate_monomials() {
        for (rule, deg) in [(TriangleRule::degree5(), 5), (TriangleRule::collapsed(6), 10)] {
            for a in 0..=deg {
                for b in 0..=deg - a {
                    let q: f64 = rule.points.iter().zip(&rule.weights).map(|(p, w)| w * p[1].powi(a as i32) * p[2].powi(b as i32)).sum();
                    assert!((q - exact(a, b)).abs() < 1e-15, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn gauss_legendre_weights() {
        let (x, w) = gauss_legendre(7);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((q - 2.0 / 13.0).abs() < 1e-15);
    }
}
