use crate::geometry::{BoundaryTag, Mesh};

use super::AssemblyError;

/// Degree-p Lagrange space on a mesh (p = 1 or 2). Local dofs are the three
/// vertices, then for p = 2 the midpoints of edges 01, 12, 20.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub degree: u8,
    pub cell_dofs: Vec<[usize; 6]>,
    pub coords: Vec<[f64; 2]>,
    /// Bit k set when the dof lies on an edge tagged with code k.
    pub boundary: Vec<u8>,
}

impl DofMap {
    pub fn new(mesh: &Mesh, degree: u8) -> Result<Self, AssemblyError> {
        if degree != 1 && degree != 2 {
            return Err(AssemblyError::Degree(degree));
        }
        let n = mesh.nodes.len();
        let mut coords = mesh.nodes.clone();
        let mut cell_dofs: Vec<[usize; 6]> = mesh.triangles.iter().map(|t| [t[0], t[1], t[2], 0, 0, 0]).collect();
        let mut boundary = vec![0u8; n];
        if degree == 2 {
            let (edges, tri_edges) = mesh.edges();
            for e in &edges {
                let (a, b) = (mesh.nodes[e[0]], mesh.nodes[e[1]]);
                coords.push([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
            }
            boundary.resize(n + edges.len(), 0);
            for (cd, te) in cell_dofs.iter_mut().zip(&tri_edges) {
                for k in 0..3 {
                    cd[3 + k] = n + te[k];
                }
            }
        }
        for (t, (tri, tags)) in mesh.triangles.iter().zip(&mesh.edge_tags).enumerate() {
            for e in 0..3 {
                if tags[e] == BoundaryTag::Interior {
                    continue;
                }
                let bit = 1u8 << tags[e].code();
                boundary[tri[e]] |= bit;
                boundary[tri[(e + 1) % 3]] |= bit;
                if degree == 2 {
                    boundary[cell_dofs[t][3 + e]] |= bit;
                }
            }
        }
        Ok(Self { degree, cell_dofs, coords, boundary })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn local_count(&self) -> usize {
        if self.degree == 1 { 3 } else { 6 }
    }

    pub fn local(&self, cell: usize) -> &[usize] {
        &self.cell_dofs[cell][..self.local_count()]
    }

    pub fn has_tag(&self, dof: usize, tag: BoundaryTag) -> bool {
        self.boundary[dof] & (1 << tag.code()) != 0
    }
}

/// Affine data of one triangle: vertices, area and barycentric gradients.
#[derive(Debug, Clone, Copy)]
pub struct Affine {
    pub p: [[f64; 2]; 3],
    pub area: f64,
    pub grad_lambda: [[f64; 2]; 3],
}

impl Affine {
    pub fn new(p: [[f64; 2]; 3]) -> Self {
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        let mut g = [[0.0; 2]; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            g[i] = [(p[j][1] - p[k][1]) / det, (p[k][0] - p[j][0]) / det];
        }
        Self { p, area: 0.5 * det, grad_lambda: g }
    }

    pub fn point(&self, l: [f64; 3]) -> [f64; 2] {
        [
            l[0] * self.p[0][0] + l[1] * self.p[1][0] + l[2] * self.p[2][0],
            l[0] * self.p[0][1] + l[1] * self.p[1][1] + l[2] * self.p[2][1],
        ]
    }

    /// Barycentric coordinates of a point.
    pub fn barycentric(&self, q: [f64; 2]) -> [f64; 3] {
        let g = &self.grad_lambda;
        let d = [q[0] - self.p[0][0], q[1] - self.p[0][1]];
        let l1 = g[1][0] * d[0] + g[1][1] * d[1];
        let l2 = g[2][0] * d[0] + g[2][1] * d[1];
        [1.0 - l1 - l2, l1, l2]
    }
}

/// Values and gradients of the local basis at barycentric point `l`.
pub fn basis(degree: u8, a: &Affine, l: [f64; 3], val: &mut [f64; 6], grad: &mut [[f64; 2]; 6]) {
    let g = &a.grad_lambda;
    if degree == 1 {
        for i in 0..3 {
            val[i] = l[i];
            grad[i] = g[i];
        }
        return;
    }
    for i in 0..3 {
        val[i] = l[i] * (2.0 * l[i] - 1.0);
        let c = 4.0 * l[i] - 1.0;
        grad[i] = [c * g[i][0], c * g[i][1]];
    }
    for e in 0..3 {
        let (i, j) = (e, (e + 1) % 3);
        val[3 + e] = 4.0 * l[i] * l[j];
        grad[3 + e] = [4.0 * (l[j] * g[i][0] + l[i] * g[j][0]), 4.0 * (l[j] * g[i][1] + l[i] * g[j][1])];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity() {
        let a = Affine::new([[0.3, 0.1], [1.7, 0.4], [0.2, 1.9]]);
        for l in [[0.2, 0.3, 0.5], [1.0, 0.0, 0.0], [0.1, 0.8, 0.1]] {
            for deg in [1u8, 2] {
                let mut v = [0.0; 6];
                let mut g = [[0.0; 2]; 6];
                basis(deg, &a, l, &mut v, &mut g);
                let n = if deg == 1 { 3 } else { 6 };
                assert!((v[..n].iter().sum::<f64>() - 1.0).abs() < 1e-14);
                assert!(g[..n].iter().map(|g| g[0]).sum::<f64>().abs() < 1e-13);
                assert!(g[..n].iter().map(|g| g[1]).sum::<f64>().abs() < 1e-13);
            }
        }
        let q = a.point([0.2, 0.3, 0.5]);
        let l = a.barycentric(q);
        assert!((l[1] - 0.3).abs() < 1e-14 && (l[2] - 0.5).abs() < 1e-14);
    }
}
