use serde::{Deserialize, Serialize};

use super::AsymptoticsError;
use crate::assembly::{basis, gauss_legendre, Affine, DofMap, TriangleRule};
use crate::geometry::Mesh;

/// A finite-element function on a mesh in scaled (x, y) coordinates.
#[derive(Debug, Clone, Copy)]
pub struct FeField<'a> {
    pub mesh: &'a Mesh,
    pub dofs: &'a DofMap,
    /// One coefficient per dof of `dofs` (constrained dofs included).
    pub values: &'a [f64],
}

impl FeField<'_> {
    fn check(&self) -> Result<(), AsymptoticsError> {
        if self.values.len() != self.dofs.len() {
            return Err(AsymptoticsError::Params(format!(
                "{} coefficients for {} degrees of freedom",
                self.values.len(),
                self.dofs.len()
            )));
        }
        Ok(())
    }

    // value and x-derivative at barycentric point l of cell t
    fn eval(&self, t: usize, a: &Affine, l: [f64; 3]) -> (f64, f64) {
        let mut v = [0.0; 6];
        let mut g = [[0.0; 2]; 6];
        basis(self.dofs.degree, a, l, &mut v, &mut g);
        let mut u = 0.0;
        let mut ux = 0.0;
        for (i, &d) in self.dofs.local(t).iter().enumerate() {
            u += self.values[d] * v[i];
            ux += self.values[d] * g[i][0];
        }
        (u, ux)
    }

    fn affine(&self, t: usize) -> Affine {
        Affine::new(self.mesh.triangles[t].map(|i| self.mesh.nodes[i]))
    }
}

/// Parameters of the piecewise Agmon weight Φ(x): η₀|x|^{3/2} for x < 0,
/// η₁∫₀ˣ dt/√|ln t| on (0, x₁), affine with slope η₂ beyond x₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgmonWeightParams {
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub x1: f64,
}

/// Tabulated Φ.
#[derive(Debug, Clone)]
pub struct AgmonWeight {
    pub params: AgmonWeightParams,
    // cumulative ∫₀^{x} dt/√|ln t| on a uniform grid of [0, x₁]
    table: Vec<f64>,
}

const TABLE_CELLS: usize = 4096;

impl AgmonWeight {
    pub fn new(params: AgmonWeightParams) -> Result<Self, AsymptoticsError> {
        let AgmonWeightParams { eta0, eta1, eta2, x1 } = params;
        if !(eta0 >= 0.0 && eta1 >= 0.0 && eta2 >= 0.0) || !(x1 > 0.0 && x1 < 1.0) {
            return Err(AsymptoticsError::Params(format!("{params:?}")));
        }
        let (gx, gw) = gauss_legendre(8);
        let dx = x1 / TABLE_CELLS as f64;
        let mut table = Vec::with_capacity(TABLE_CELLS + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for i in 0..TABLE_CELLS {
            let (c, hw) = (dx * (i as f64 + 0.5), 0.5 * dx);
            acc += gx.iter().zip(&gw).map(|(x, w)| w * hw / (c + hw * x).ln().abs().sqrt()).sum::<f64>();
            table.push(acc);
        }
        Ok(Self { params, table })
    }

    fn log_integral(&self, x: f64) -> f64 {
        let u = (x / self.params.x1 * TABLE_CELLS as f64).clamp(0.0, TABLE_CELLS as f64);
        let i = (u.floor() as usize).min(TABLE_CELLS - 1);
        let f = u - i as f64;
        self.table[i] * (1.0 - f) + self.table[i + 1] * f
    }

    pub fn phi(&self, x: f64) -> f64 {
        let p = &self.params;
        if x <= 0.0 {
            p.eta0 * x.abs().powf(1.5)
        } else if x <= p.x1 {
            p.eta1 * self.log_integral(x)
        } else {
            p.eta2 * (x - p.x1) + p.eta1 * self.table[TABLE_CELLS]
        }
    }
}

/// Largest exponent 2Φ/h used before clamping.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgmonRatio {
    pub ratio: f64,
    /// The exponent exceeded [`MAX_EXPONENT`] somewhere; the ratio is then
    /// a lower bound only.
    pub clamped: bool,
    pub max_exponent: f64,
}

/// ∫ e^{2Φ/h}(|ψ|² + |h∂ₓψ|²) y dx dy / ∫ |ψ|² y dx dy.
pub fn agmon_ratio(field: &FeField, h: f64, weight: &AgmonWeight) -> Result<AgmonRatio, AsymptoticsError> {
    field.check()?;
    if !(h > 0.0) {
        return Err(AsymptoticsError::Params(format!("h = {h}")));
    }
    let rule = TriangleRule::collapsed(6);
    let mut num = 0.0;
    let mut den = 0.0;
    let mut clamped = false;
    let mut max_exponent = f64::NEG_INFINITY;
    for t in 0..field.mesh.triangles.len() {
        let a = field.affine(t);
        for (l, w) in rule.points.iter().zip(&rule.weights) {
            let p = a.point(*l);
            let (u, ux) = field.eval(t, &a, *l);
            let dw = w * a.area * p[1];
            let mut ex = 2.0 * weight.phi(p[0]) / h;
            max_exponent = max_exponent.max(ex);
            if ex > MAX_EXPONENT {
                ex = MAX_EXPONENT;
                clamped = true;
            }
            num += dw * ex.exp() * (u * u + h * h * ux * ux);
            den += dw * u * u;
        }
    }
    if !(den > 0.0) {
        return Err(AsymptoticsError::Params("field has zero norm".into()));
    }
    Ok(AgmonRatio { ratio: num / den, clamped, max_exponent })
}

// The part of triangle `p` with x > x0, as a fan of triangles.
fn clip_right(p: [[f64; 2]; 3], x0: f64) -> Vec<[[f64; 2]; 3]> {
    let mut poly: Vec<[f64; 2]> = Vec::with_capacity(4);
    for i in 0..3 {
        let (a, b) = (p[i], p[(i + 1) % 3]);
        let (ina, inb) = (a[0] > x0, b[0] > x0);
        if ina {
            poly.push(a);
        }
        if ina != inb {
            let s = (x0 - a[0]) / (b[0] - a[0]);
            poly.push([x0, a[1] + s * (b[1] - a[1])]);
        }
    }
    (1..poly.len().saturating_sub(1)).map(|i| [poly[0], poly[i], poly[i + 1]]).collect()
}

/// Fraction of ∫|ψ|² y over {x > x0}. Cells cut by the line x = x0 are
/// clipped, so the result is continuous in x0.
pub fn mass_fraction_beyond(field: &FeField, x0: f64) -> Result<f64, AsymptoticsError> {
    field.check()?;
    let rule = TriangleRule::degree5();
    let mut part = 0.0;
    let mut total = 0.0;
    for t in 0..field.mesh.triangles.len() {
        let a = field.affine(t);
        let integrate = |q: [[f64; 2]; 3]| {
            let sub = Affine::new(q);
            let mut s = 0.0;
            for (l, w) in rule.points.iter().zip(&rule.weights) {
                let pt = sub.point(*l);
                let (u, _) = field.eval(t, &a, a.barycentric(pt));
                s += w * sub.area * pt[1] * u * u;
            }
            s
        };
        let whole = integrate(a.p);
        total += whole;
        let (xmin, xmax) = a.p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[0]), hi.max(v[0])));
        if xmin >= x0 {
            part += whole;
        } else if xmax > x0 {
            part += clip_right(a.p, x0).into_iter().map(integrate).sum::<f64>();
        }
    }
    if !(total > 0.0) {
        return Err(AsymptoticsError::Params("field has zero norm".into()));
    }
    Ok(part / total)
}

/// The abscissa where the mass fraction beyond x drops to `level`, by
/// bisection over the x-extent of the mesh.
pub fn leakage_abscissa(field: &FeField, level: f64) -> Result<f64, AsymptoticsError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(AsymptoticsError::Params(format!("level {level}")));
    }
    let (mut lo, mut hi) =
        field.mesh.nodes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[0]), b.max(p[0])));
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mass_fraction_beyond(field, mid)? > level {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_is_continuous() {
        let w = AgmonWeight::new(AgmonWeightParams { eta0: 0.1, eta1: 0.1, eta2: 0.1, x1: 0.25 }).unwrap();
        assert_eq!(w.phi(0.0), 0.0);
        let e = 1e-9;
        assert!((w.phi(0.25 - e) - w.phi(0.25 + e)).abs() < 1e-8);
        // ∫₀^{1/4} dt/√|ln t| by a fine midpoint sum
        let n = 200_000;
        let s: f64 = (0..n).map(|i| 0.25 / n as f64 / ((i as f64 + 0.5) * 0.25 / n as f64).ln().abs().sqrt()).sum();
        assert!((w.phi(0.25) - 0.1 * s).abs() < 1e-7);
    }

    #[test]
    fn clipping_preserves_area() {
        let p = [[0.0, 0.0], [2.0, 0.5], [1.0, 2.0]];
        for x0 in [-1.0, 0.3, 1.0, 1.7, 3.0] {
            let right: f64 = clip_right(p, x0).iter().map(|q| Affine::new(*q).area).sum();
            let left: f64 = clip_right([[-p[0][0], p[0][1]], [-p[2][0], p[2][1]], [-p[1][0], p[1][1]]], -x0)
                .iter()
                .map(|q| Affine::new(*q).area)
                .sum();
            assert!((right + left - Affine::new(p).area).abs() < 1e-14);
        }
    }
}
