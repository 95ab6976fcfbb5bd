use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Largest accepted aperture, in degrees. Above it the bound states sit
/// exponentially close to the threshold and no practical truncation
/// captures them.
pub const THETA_MAX_DEG: f64 = 89.0;
/// Smallest accepted aperture, in degrees.
pub const THETA_MIN_DEG: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum BoundaryTag {
    Interior = 0,
    DirichletWall = 1,
    Axis = 2,
    Truncation = 3,
}

impl BoundaryTag {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Self::Interior),
            1 => Some(Self::DirichletWall),
            2 => Some(Self::Axis),
            3 => Some(Self::Truncation),
            _ => None,
        }
    }
}

/// Which planar region is meshed.
///
/// `MeridianGuide` and `Triangle` live in the rotated coordinates (s, u),
/// `ScaledGuide` and `ScaledTriangle` in the scaled coordinates (x, y).
/// The triangles are the parts of the guides left of the vertex of the
/// inner cone, closed by a Dirichlet wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    MeridianGuide,
    Triangle,
    ScaledGuide,
    ScaledTriangle,
}

impl Shape {
    pub fn is_scaled(self) -> bool {
        matches!(self, Shape::ScaledGuide | Shape::ScaledTriangle)
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, Shape::Triangle | Shape::ScaledTriangle)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub theta: f64,
    pub truncation: f64,
    pub shape: Shape,
    polygon: Vec<[f64; 2]>,
    side_tags: Vec<BoundaryTag>,
}

impl DomainSpec {
    /// `truncation` is the largest longitudinal coordinate kept (s for the
    /// rotated shapes, x for the scaled ones); it is ignored for triangles.
    pub fn new(shape: Shape, theta: f64, truncation: f64) -> Result<Self, GeometryError> {
        let deg = theta.to_degrees();
        if !(THETA_MIN_DEG..=THETA_MAX_DEG).contains(&deg) {
            return Err(GeometryError::Aperture { theta_deg: deg, min: THETA_MIN_DEG, max: THETA_MAX_DEG });
        }
        if !shape.is_bounded() && !(truncation > 0.0 && truncation.is_finite()) {
            return Err(GeometryError::Truncation(truncation));
        }
        let t = truncation;
        let a = PI * SQRT_2;
        let tip = -PI / theta.tan();
        use BoundaryTag::*;
        let (polygon, side_tags) = match shape {
            Shape::MeridianGuide => (
                vec![[tip, PI], [0.0, 0.0], [t, 0.0], [t, PI]],
                vec![Axis, DirichletWall, Truncation, DirichletWall],
            ),
            Shape::Triangle => (vec![[tip, PI], [0.0, 0.0], [0.0, PI]], vec![Axis, DirichletWall, DirichletWall]),
            Shape::ScaledGuide => (
                vec![[-a, 0.0], [0.0, 0.0], [t, t], [t, t + a]],
                vec![Axis, DirichletWall, Truncation, DirichletWall],
            ),
            Shape::ScaledTriangle => (vec![[-a, 0.0], [0.0, 0.0], [0.0, a]], vec![Axis, DirichletWall, DirichletWall]),
        };
        Ok(Self { theta, truncation, shape, polygon, side_tags })
    }

    /// Scaled shapes are parametrised by the semiclassical parameter h = tan θ.
    pub fn scaled(shape: Shape, h: f64, truncation: f64) -> Result<Self, GeometryError> {
        if !(h > 0.0) {
            return Err(GeometryError::Aperture { theta_deg: h.atan().to_degrees(), min: THETA_MIN_DEG, max: THETA_MAX_DEG });
        }
        Self::new(shape, h.atan(), truncation)
    }

    /// Counter-clockwise vertices; side i joins vertex i to vertex i+1.
    pub fn polygon(&self) -> &[[f64; 2]] {
        &self.polygon
    }

    pub fn side_tags(&self) -> &[BoundaryTag] {
        &self.side_tags
    }

    /// Longitudinal extent: from the tip on the axis to the truncation (or
    /// to the vertex of the inner cone for triangles).
    pub fn longitudinal_range(&self) -> (f64, f64) {
        let start = self.polygon[0][0];
        let end = if self.shape.is_bounded() { 0.0 } else { self.truncation };
        (start, end)
    }

    /// Lower and upper transverse bounds of the column at longitudinal
    /// coordinate `xi`.
    pub fn transverse_bounds(&self, xi: f64) -> (f64, f64) {
        match self.shape {
            Shape::MeridianGuide | Shape::Triangle => ((-xi * self.theta.tan()).max(0.0).min(PI), PI),
            Shape::ScaledGuide | Shape::ScaledTriangle => (xi.max(0.0), (xi + PI * SQRT_2).max(0.0)),
        }
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.polygon)
    }

    /// Containment with an absolute tolerance; boundary points count as inside.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        let n = self.polygon.len();
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            if cross < -tol * len {
                return false;
            }
        }
        true
    }

    /// Index of the polygon side closest to `p`, with the distance.
    pub fn nearest_side(&self, p: [f64; 2]) -> (usize, f64) {
        let n = self.polygon.len();
        let mut best = (0, f64::INFINITY);
        for i in 0..n {
            let d = segment_distance(p, self.polygon[i], self.polygon[(i + 1) % n]);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// Length scale used for geometric tolerances.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.polygon {
            for b in &self.polygon {
                d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        d
    }
}

pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let q = [a[0] + t * d[0], a[1] + t * d[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// (s, u) -> (r, z).
pub fn to_cylindrical(su: [f64; 2], theta: f64) -> [f64; 2] {
    let (st, ct) = theta.sin_cos();
    let [s, u] = su;
    [s * st + u * ct, s * ct - u * st]
}

/// (r, z) -> (s, u).
pub fn from_cylindrical(rz: [f64; 2], theta: f64) -> [f64; 2] {
    let (st, ct) = theta.sin_cos();
    let [r, z] = rz;
    [z * ct + r * st, -z * st + r * ct]
}

/// (r, z) -> (x, y) with x = z √2 sin θ, y = r √2 cos θ.
pub fn to_scaled(rz: [f64; 2], theta: f64) -> [f64; 2] {
    let (st, ct) = theta.sin_cos();
    [rz[1] * SQRT_2 * st, rz[0] * SQRT_2 * ct]
}

/// (x, y) -> (r, z).
pub fn from_scaled(xy: [f64; 2], theta: f64) -> [f64; 2] {
    let (st, ct) = theta.sin_cos();
    [xy[1] / (SQRT_2 * ct), xy[0] / (SQRT_2 * st)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_triangle() {
        let d = DomainSpec::new(Shape::Triangle, PI / 4.0, 0.0).unwrap();
        let p = d.polygon();
        assert!((p[0][0] + PI).abs() < 1e-14 && (p[0][1] - PI).abs() < 1e-14);
        assert_eq!(p[1], [0.0, 0.0]);
        assert_eq!(p[2], [0.0, PI]);
        assert!((d.area() - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DomainSpec::new(Shape::MeridianGuide, 89.9f64.to_radians(), 10.0).is_err());
        assert!(DomainSpec::new(Shape::MeridianGuide, 0.3, 0.0).is_err());
        assert!(DomainSpec::new(Shape::MeridianGuide, 0.3, f64::NAN).is_err());
    }

    #[test]
    fn guide_edges_map_to_cones() {
        let theta = 0.4;
        let d = DomainSpec::new(Shape::MeridianGuide, theta, 5.0).unwrap();
        // the lower wall u = 0 is the inner cone r = z tan θ
        let rz = to_cylindrical([3.0, 0.0], theta);
        assert!((rz[0] - rz[1] * theta.tan()).abs() < 1e-14);
        // the tip lies on the axis
        let rz = to_cylindrical(d.polygon()[0], theta);
        assert!(rz[0].abs() < 1e-14);
        assert!((rz[1] + PI / theta.sin()).abs() < 1e-12);
    }
}
