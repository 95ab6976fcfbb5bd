use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{BoundaryTag, DomainSpec, GeometryError};

/// Controls for the column-structured graded mesh.
///
/// Columns are placed along the longitudinal coordinate with spacing
/// `h_near` inside `[-near_left, near_right]`, growing by `ratio` per cell
/// outside (capped at `max_size`). The cell touching the vertex of the inner
/// cone is split into `corner_layers` geometric layers with factor
/// `corner_ratio`, longitudinally and transversally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeshParams {
    pub h_near: f64,
    pub near_left: f64,
    pub near_right: f64,
    pub ratio: f64,
    pub max_size: f64,
    pub transverse_cells: usize,
    pub corner_layers: usize,
    pub corner_ratio: f64,
    pub max_elements: usize,
}

impl Default for MeshParams {
    fn default() -> Self {
        Self {
            h_near: 0.25,
            near_left: 3.0,
            near_right: 3.0,
            ratio: 1.15,
            max_size: 2.0,
            transverse_cells: 8,
            corner_layers: 4,
            corner_ratio: 0.3,
            max_elements: 2_000_000,
        }
    }
}

impl MeshParams {
    fn check(&self) -> Result<(), GeometryError> {
        let ok = self.h_near > 0.0
            && self.near_left >= 0.0
            && self.near_right >= 0.0
            && self.ratio >= 1.0
            && self.max_size >= self.h_near
            && self.transverse_cells >= 1
            && self.corner_ratio > 0.0
            && self.corner_ratio < 1.0;
        if ok {
            Ok(())
        } else {
            Err(GeometryError::Params(format!("{self:?}")))
        }
    }
}

/// Breakpoints the mesh was built on, kept for grading checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grading {
    pub longitudinal: Vec<f64>,
    pub transverse: Vec<f64>,
    pub near: (f64, f64),
    pub ratio: f64,
    pub max_size: f64,
}

/// Triangle mesh with per-edge boundary tags. Edge 0 of a triangle joins
/// its vertices 0 and 1, edge 1 joins 1 and 2, edge 2 joins 2 and 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub edge_tags: Vec<[BoundaryTag; 3]>,
    pub grading: Option<Grading>,
}

impl Mesh {
    pub fn generate(domain: &DomainSpec, params: &MeshParams) -> Result<Mesh, GeometryError> {
        params.check()?;
        let (start, end) = domain.longitudinal_range();
        let xs = longitudinal_breakpoints(start, end, params);
        let ts = transverse_breakpoints(params);
        let ncols = xs.len();
        let nt = ts.len();
        let elements = (ncols - 2) * 2 * (nt - 1) + (nt - 1);
        if elements > params.max_elements {
            return Err(GeometryError::Resource { elements, limit: params.max_elements });
        }

        let mut nodes = Vec::with_capacity(1 + (ncols - 1) * nt);
        nodes.push(domain.polygon()[0]);
        for &x in &xs[1..] {
            let (lo, hi) = domain.transverse_bounds(x);
            for &t in &ts {
                nodes.push([x, lo + t * (hi - lo)]);
            }
        }
        let id = |col: usize, j: usize| 1 + (col - 1) * nt + j;
        let mut triangles = Vec::with_capacity(elements);
        for j in 0..nt - 1 {
            triangles.push([0, id(1, j), id(1, j + 1)]);
        }
        for c in 1..ncols - 1 {
            for j in 0..nt - 1 {
                let (a, b, cc, d) = (id(c, j), id(c + 1, j), id(c + 1, j + 1), id(c, j + 1));
                triangles.push([a, b, cc]);
                triangles.push([a, cc, d]);
            }
        }
        let mut mesh = Mesh {
            nodes,
            triangles,
            edge_tags: Vec::new(),
            grading: Some(Grading {
                longitudinal: xs,
                transverse: ts,
                near: (params.near_left, params.near_right),
                ratio: params.ratio,
                max_size: params.max_size,
            }),
        };
        mesh.tag_boundary(domain)?;
        Ok(mesh)
    }

    /// Tags every boundary edge with the tag of the polygon side it lies on.
    pub fn tag_boundary(&mut self, domain: &DomainSpec) -> Result<(), GeometryError> {
        let counts = self.edge_counts();
        let tol = 1e-9 * domain.diameter();
        let mut tags = Vec::with_capacity(self.triangles.len());
        for t in &self.triangles {
            let mut tt = [BoundaryTag::Interior; 3];
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                if counts[&key(a, b)] == 1 {
                    let m = midpoint(self.nodes[a], self.nodes[b]);
                    let (side, dist) = domain.nearest_side(m);
                    if dist > tol {
                        return Err(GeometryError::Invalid(format!("boundary edge ({a},{b}) is off the domain boundary")));
                    }
                    tt[e] = domain.side_tags()[side];
                }
            }
            tags.push(tt);
        }
        self.edge_tags = tags;
        Ok(())
    }

    fn edge_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::with_capacity(self.triangles.len() * 2);
        for t in &self.triangles {
            for e in 0..3 {
                *counts.entry(key(t[e], t[(e + 1) % 3])).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Unique edges in order of first appearance, and for each triangle the
    /// indices of its three edges.
    pub fn edges(&self) -> (Vec<[usize; 2]>, Vec<[usize; 3]>) {
        let mut index = HashMap::with_capacity(self.triangles.len() * 2);
        let mut edges = Vec::new();
        let mut tri_edges = Vec::with_capacity(self.triangles.len());
        for t in &self.triangles {
            let mut te = [0; 3];
            for e in 0..3 {
                let k = key(t[e], t[(e + 1) % 3]);
                te[e] = *index.entry(k).or_insert_with(|| {
                    edges.push([k.0, k.1]);
                    edges.len() - 1
                });
            }
            tri_edges.push(te);
        }
        (edges, tri_edges)
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.nodes[i]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    }

    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let p = self.triangles[t].map(|i| self.nodes[i]);
        (0..3).map(|e| dist(p[e], p[(e + 1) % 3])).fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Boundary edges with their tags.
    pub fn boundary_edges(&self) -> Vec<([usize; 2], BoundaryTag)> {
        let mut out = Vec::new();
        for (t, tags) in self.triangles.iter().zip(&self.edge_tags) {
            for e in 0..3 {
                if tags[e] != BoundaryTag::Interior {
                    out.push(([t[e], t[(e + 1) % 3]], tags[e]));
                }
            }
        }
        out
    }

    /// Checks orientation, conformity, tag consistency and containment.
    pub fn validate(&self, domain: &DomainSpec) -> Result<(), GeometryError> {
        if self.triangles.is_empty() {
            return Err(GeometryError::Invalid("mesh has no triangles".into()));
        }
        if self.edge_tags.len() != self.triangles.len() {
            return Err(GeometryError::Invalid("edge tag count differs from triangle count".into()));
        }
        let tol = 1e-9 * domain.diameter();
        for (i, p) in self.nodes.iter().enumerate() {
            if !domain.contains(*p, tol) {
                return Err(GeometryError::Invalid(format!("node {i} at {p:?} lies outside the domain")));
            }
        }
        for t in 0..self.triangles.len() {
            if self.triangles[t].iter().any(|&i| i >= self.nodes.len()) {
                return Err(GeometryError::Invalid(format!("triangle {t} references a missing node")));
            }
            if !(self.triangle_area(t) > 0.0) {
                return Err(GeometryError::Invalid(format!("triangle {t} is degenerate or clockwise")));
            }
        }
        let counts = self.edge_counts();
        if counts.values().any(|&c| c > 2) {
            return Err(GeometryError::Invalid("an edge is shared by more than two triangles".into()));
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                let boundary = counts[&key(tri[e], tri[(e + 1) % 3])] == 1;
                if boundary != (self.edge_tags[t][e] != BoundaryTag::Interior) {
                    return Err(GeometryError::Invalid(format!("edge {e} of triangle {t} carries an inconsistent tag")));
                }
            }
        }
        let rel = (self.area() - domain.area()).abs() / domain.area();
        if rel > 1e-10 {
            return Err(GeometryError::Invalid(format!("mesh area differs from domain area by {rel:e}")));
        }
        Ok(())
    }

    /// Splits every triangle into four through its edge midpoints. Coarse
    /// nodes keep their indices, so the coarse mesh is nested in the result.
    pub fn refine_uniform(&self) -> Mesh {
        let (edges, tri_edges) = self.edges();
        let n0 = self.nodes.len();
        let mut nodes = self.nodes.clone();
        for e in &edges {
            nodes.push(midpoint(self.nodes[e[0]], self.nodes[e[1]]));
        }
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        let mut edge_tags = Vec::with_capacity(4 * self.triangles.len());
        use BoundaryTag::Interior as I;
        for ((t, te), tags) in self.triangles.iter().zip(&tri_edges).zip(&self.edge_tags) {
            let [a, b, c] = *t;
            let (ab, bc, ca) = (n0 + te[0], n0 + te[1], n0 + te[2]);
            triangles.push([a, ab, ca]);
            edge_tags.push([tags[0], I, tags[2]]);
            triangles.push([ab, b, bc]);
            edge_tags.push([tags[0], tags[1], I]);
            triangles.push([ca, bc, c]);
            edge_tags.push([I, tags[1], tags[2]]);
            triangles.push([ab, bc, ca]);
            edge_tags.push([I, I, I]);
        }
        let grading = self.grading.as_ref().map(|g| Grading {
            longitudinal: bisect(&g.longitudinal),
            transverse: bisect(&g.transverse),
            ..g.clone()
        });
        Mesh { nodes, triangles, edge_tags, grading }
    }
}

fn bisect(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    for w in v.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(v.last());
    out
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b { (a, b) } else { (b, a) }
}

fn midpoint(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Column positions from `start` (the tip) to `end`, always including 0.
pub fn longitudinal_breakpoints(start: f64, end: f64, p: &MeshParams) -> Vec<f64> {
    let mut xs: Vec<f64> = side_positions(-start, p.near_left, p).into_iter().rev().map(|d| -d).collect();
    xs.push(0.0);
    if end > 0.0 {
        xs.extend(side_positions(end, p.near_right, p));
    }
    xs
}

/// Distances from 0 outward, ending exactly at `extent`.
fn side_positions(extent: f64, near: f64, p: &MeshParams) -> Vec<f64> {
    let h = p.h_near.min(extent);
    let mut pts: Vec<f64> = (1..=p.corner_layers).rev().map(|k| h * p.corner_ratio.powi(k as i32)).collect();
    pts.push(h);
    if h >= extent {
        *pts.last_mut().unwrap() = extent;
        return pts;
    }
    let mut pos = h;
    let mut size = h;
    loop {
        if pos >= near - 1e-12 {
            size = (size * p.ratio).min(p.max_size);
        }
        let next = pos + size;
        if next >= extent - 0.3 * size {
            pts.push(extent);
            return pts;
        }
        pts.push(next);
        pos = next;
    }
}

/// Fractions of the column height, 0 at the lower bound.
pub fn transverse_breakpoints(p: &MeshParams) -> Vec<f64> {
    let m = p.transverse_cells;
    let first = 1.0 / m as f64;
    let mut ts = vec![0.0];
    ts.extend((1..=p.corner_layers).rev().map(|k| first * p.corner_ratio.powi(k as i32)));
    ts.extend((1..=m).map(|j| j as f64 / m as f64));
    ts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;

    #[test]
    fn generated_meshes_validate() {
        for shape in [Shape::MeridianGuide, Shape::Triangle, Shape::ScaledGuide, Shape::ScaledTriangle] {
            let d = DomainSpec::new(shape, 0.5, 8.0).unwrap();
            let m = Mesh::generate(&d, &MeshParams::default()).unwrap();
            m.validate(&d).unwrap();
            m.refine_uniform().validate(&d).unwrap();
        }
    }

    #[test]
    fn budget_is_enforced() {
        let d = DomainSpec::new(Shape::MeridianGuide, 0.5, 8.0).unwrap();
        let p = MeshParams { max_elements: 10, ..MeshParams::default() };
        assert!(matches!(Mesh::generate(&d, &p), Err(GeometryError::Resource { .. })));
    }
}
