use conilay::assembly::*;
use conilay::eigensolve::*;
use conilay::geometry::*;

fn coarse() -> MeshParams {
    MeshParams { h_near: 0.5, ratio: 1.3, max_size: 2.0, transverse_cells: 3, corner_layers: 2, ..MeshParams::default() }
}

fn guide(theta_deg: f64, truncation: f64) -> DomainSpec {
    DomainSpec::new(Shape::MeridianGuide, theta_deg.to_radians(), truncation).unwrap()
}

fn reduced(mesh: &Mesh, coords: Coordinates, degree: u8) -> Reduced {
    let a = assemble(&FiberProblem { mesh, coords, degree }).unwrap();
    apply_constraints(&a).unwrap()
}

fn lowest(r: &Reduced, k: usize) -> Vec<f64> {
    smallest_eigenpairs(&r.stiffness, &r.mass, k, &SolverOptions::default()).unwrap().values
}

// ∫ (a x + b y) over a polygon from the shoelace first moments.
fn linear_integral(poly: &[[f64; 2]], a: f64, b: f64) -> f64 {
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let w = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * w / 6.0;
        cy += (p[1] + q[1]) * w / 6.0;
    }
    a * cx + b * cy
}

#[test]
fn mass_integrates_the_weight() {
    let theta = 30f64.to_radians();
    let d = guide(30.0, 6.0);
    let mesh = Mesh::generate(&d, &coarse()).unwrap();
    for degree in [1, 2] {
        let a = assemble(&FiberProblem { mesh: &mesh, coords: Coordinates::Rotated { theta, m: 0 }, degree }).unwrap();
        let ones = vec![1.0; a.dofs.len()];
        let total = a.mass.inner(&ones, &ones);
        let exact = linear_integral(d.polygon(), theta.sin(), theta.cos());
        assert!((total - exact).abs() < 1e-10 * exact, "p = {degree}: {total} vs {exact}");
        let k1 = a.stiffness.apply(&ones);
        assert!(k1.iter().all(|v| v.abs() < 1e-10));
    }
}

#[test]
fn dense_and_iterative_agree() {
    let mesh = Mesh::generate(&guide(30.0, 6.0), &coarse()).unwrap();
    let r = reduced(&mesh, Coordinates::Rotated { theta: 30f64.to_radians(), m: 0 }, 2);
    assert!(r.dim() <= DENSE_LIMIT);
    let dense = dense_eigenpairs(&r.stiffness, &r.mass, 4).unwrap();
    let iter = smallest_eigenpairs(&r.stiffness, &r.mass, 4, &SolverOptions::default()).unwrap();
    for (a, b) in dense.values.iter().zip(&iter.values) {
        assert!((a - b).abs() < 1e-9 * a, "{a} {b}");
    }
    for (x, mu) in iter.vectors.iter().zip(&iter.values) {
        assert!((r.mass.inner(x, x) - 1.0).abs() < 1e-10);
        assert!((r.stiffness.inner(x, x) - mu).abs() < 1e-9);
    }
}

#[test]
fn refinement_and_degree_lower_the_eigenvalues() {
    let theta = 20f64.to_radians();
    let coords = Coordinates::Rotated { theta, m: 0 };
    let mesh = Mesh::generate(&guide(20.0, 6.0), &coarse()).unwrap();
    let fine = mesh.refine_uniform();
    let p1 = lowest(&reduced(&mesh, coords, 1), 3);
    let p2 = lowest(&reduced(&mesh, coords, 2), 3);
    let p2_fine = lowest(&reduced(&fine, coords, 2), 3);
    for i in 0..3 {
        assert!(p2[i] <= p1[i] + 1e-10);
        assert!(p2_fine[i] <= p2[i] + 1e-10);
    }
}

#[test]
fn triangle_is_nested_in_the_guide() {
    let theta = 25f64.to_radians();
    let params = coarse();
    let g = Mesh::generate(&guide(25.0, 6.0), &params).unwrap();
    let t = Mesh::generate(&DomainSpec::new(Shape::Triangle, theta, 0.0).unwrap(), &params).unwrap();
    for p in &t.nodes {
        assert!(g.nodes.iter().any(|q| (p[0] - q[0]).abs() + (p[1] - q[1]).abs() < 1e-12), "{p:?}");
    }
    let coords = Coordinates::Rotated { theta, m: 0 };
    let lg = lowest(&reduced(&g, coords, 2), 2);
    let lt = lowest(&reduced(&t, coords, 2), 2);
    assert!(lt[0] >= lg[0] && lt[1] >= lg[1]);
}

#[test]
fn reference_frame_is_monotone_in_theta() {
    let d = DomainSpec::new(Shape::MeridianGuide, std::f64::consts::FRAC_PI_4, 8.0).unwrap();
    let mesh = Mesh::generate(&d, &coarse()).unwrap();
    let mut last: Option<Vec<f64>> = None;
    for deg in [10.0, 20.0, 30.0, 40.0, 50.0] {
        let mu = lowest(&reduced(&mesh, Coordinates::Reference { theta: f64::to_radians(deg) }, 2), 3);
        if let Some(prev) = &last {
            for (a, b) in prev.iter().zip(&mu) {
                assert!(b >= a, "{deg}: {b} < {a}");
            }
        }
        last = Some(mu);
    }
}

#[test]
fn reference_and_rotated_frames_agree() {
    let theta = 30f64.to_radians();
    let params = MeshParams { h_near: 0.2, ratio: 1.15, max_size: 1.0, transverse_cells: 8, ..MeshParams::default() };
    let rot = Mesh::generate(&guide(30.0, 10.0), &params).unwrap();
    let mut scaled = params.clone();
    let t = theta.tan();
    scaled.h_near *= t;
    scaled.near_left *= t;
    scaled.near_right *= t;
    scaled.max_size *= t;
    let refd = DomainSpec::new(Shape::MeridianGuide, std::f64::consts::FRAC_PI_4, 10.0 * t).unwrap();
    let refm = Mesh::generate(&refd, &scaled).unwrap();
    let a = lowest(&reduced(&rot, Coordinates::Rotated { theta, m: 0 }, 2), 2);
    let b = lowest(&reduced(&refm, Coordinates::Reference { theta }, 2), 2);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-4, "{x} {y}");
    }
}

#[test]
fn fiber_needs_the_axis_constraint() {
    let theta = 30f64.to_radians();
    let mesh = Mesh::generate(&guide(30.0, 6.0), &coarse()).unwrap();
    let a = assemble(&FiberProblem { mesh: &mesh, coords: Coordinates::Rotated { theta, m: 1 }, degree: 2 }).unwrap();
    assert!(apply_dirichlet(&a, &[BoundaryTag::DirichletWall, BoundaryTag::Truncation]).is_err());
    let r = apply_constraints(&a).unwrap();
    assert!(lowest(&r, 1)[0] > 1.0);
}

#[test]
fn aperture_limits() {
    for deg in [0.0, 0.005, 89.9, 90.0, -5.0] {
        assert!(DomainSpec::new(Shape::MeridianGuide, f64::to_radians(deg), 5.0).is_err(), "{deg}");
    }
    assert!(DomainSpec::new(Shape::MeridianGuide, f64::to_radians(89.0), 5.0).is_ok());
    assert!(DomainSpec::new(Shape::MeridianGuide, 0.3, -1.0).is_err());
}

#[test]
fn mesh_file_round_trip() {
    let mesh = Mesh::generate(&guide(45.0, 4.0), &coarse()).unwrap();
    let mut buf = Vec::new();
    write_mesh(&mesh, &mut buf).unwrap();
    let back = read_mesh(&buf[..]).unwrap();
    assert_eq!(back.triangles, mesh.triangles);
    assert_eq!(back.edge_tags, mesh.edge_tags);
    for (p, q) in back.nodes.iter().zip(&mesh.nodes) {
        assert!((p[0] - q[0]).abs() + (p[1] - q[1]).abs() < 1e-14);
    }
}
