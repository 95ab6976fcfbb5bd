use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;

use conilay::assembly::SparseSymmetricMatrix;
use conilay::asymptotics::*;
use conilay::eigensolve::{count_below, reverse_cuthill_mckee, EnvelopeLdl};
use conilay::geometry::*;
use conilay::potential1d::{effective_potential, potential_minimum, segment_bound, SECTION_WIDTH};

fn banded(n: usize, vals: &[f64], shift: f64) -> SparseSymmetricMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, vals[i] + shift));
        if i + 1 < n {
            t.push((i + 1, i, vals[n + i]));
        }
        if i + 3 < n {
            t.push((i + 3, i, 0.5 * vals[2 * n + i]));
        }
    }
    SparseSymmetricMatrix::from_triplets(n, &t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cylindrical_round_trip(s in -50.0..50.0f64, u in 0.0..PI, deg in 0.01..89.0f64) {
        let theta = deg.to_radians();
        let rz = to_cylindrical([s, u], theta);
        let back = from_cylindrical(rz, theta);
        prop_assert!((back[0] - s).abs() < 1e-12 && (back[1] - u).abs() < 1e-12);
        let xy = to_scaled(rz, theta);
        let again = from_scaled(xy, theta);
        prop_assert!((again[0] - rz[0]).abs() < 1e-9 * (1.0 + rz[0].abs()));
        prop_assert!((again[1] - rz[1]).abs() < 1e-9 * (1.0 + rz[1].abs()));
    }

    #[test]
    fn mesh_covers_the_domain(
        deg in 5.0..85.0f64,
        trunc in 1.0..20.0f64,
        h in 0.2..1.0f64,
        ratio in 1.0..1.5f64,
        cells in 1usize..6,
        layers in 0usize..4,
    ) {
        let d = DomainSpec::new(Shape::MeridianGuide, deg.to_radians(), trunc).unwrap();
        let p = MeshParams { h_near: h, ratio, max_size: 4.0, transverse_cells: cells, corner_layers: layers, ..MeshParams::default() };
        let mesh = Mesh::generate(&d, &p).unwrap();
        prop_assert!(mesh.validate(&d).is_ok());
        prop_assert!((mesh.area() - d.area()).abs() < 1e-9 * d.area());
        prop_assert!((0..mesh.triangles.len()).all(|t| mesh.triangle_area(t) > 0.0));
        let fine = mesh.refine_uniform();
        prop_assert_eq!(fine.triangles.len(), 4 * mesh.triangles.len());
        prop_assert!((fine.area() - mesh.area()).abs() < 1e-9 * d.area());
    }

    #[test]
    fn staircase_is_a_count(mut mu in prop::collection::vec(0.0..1.0f64, 1..40), e in 1e-6..1.0f64) {
        mu.sort_by(f64::total_cmp);
        let n = staircase(&mu, &[e, 0.5 * e]).unwrap();
        prop_assert_eq!(n[0], mu.iter().filter(|&&m| m < 1.0 - e).count());
        prop_assert!(n[1] >= n[0]);
    }

    #[test]
    fn line_is_recovered(a in -5.0..5.0f64, b in 0.1..3.0f64, n in 3usize..30) {
        let x: Vec<f64> = (0..n).map(|i| i as f64 * 0.7 + 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| a + b * v).collect();
        let fit = linear_fit(&x, &y).unwrap();
        prop_assert!((fit.slope - b).abs() < 1e-10 && (fit.intercept - a).abs() < 1e-9);
        prop_assert!((fit.correlation - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bridge_identity(deg in 0.5..89.0f64) {
        let theta = deg.to_radians();
        let c = counting_coefficient(theta);
        prop_assert!((inverse_square_coefficient(bridge_coupling(theta)) - c).abs() < 1e-13 * c.max(1.0));
        let (lam, h) = mu_to_lambda(0.8, theta);
        prop_assert!((lambda_to_mu(lam, theta) - 0.8).abs() < 1e-14);
        prop_assert!((h - theta.tan()).abs() < 1e-14);
    }

    #[test]
    fn potential_bounds(x in -SECTION_WIDTH + 1e-3..40.0f64) {
        let s = effective_potential(x).unwrap();
        prop_assert!(s.v >= potential_minimum() - 1e-14);
        prop_assert!(s.v >= segment_bound(x) - 1e-14);
        prop_assert!(x < 0.0 || s.v < 0.5 + 1e-12);
        prop_assert!(s.residual.abs() < 1e-9);
    }

    #[test]
    fn inertia_matches_dense(vals in prop::collection::vec(-1.0..1.0f64, 36), sigma in -1.0..4.0f64) {
        let n = 12;
        let k = banded(n, &vals, 2.0);
        let m = banded(n, &vec![0.0; 3 * n], 1.0);
        let count = count_below(&k, &m, sigma).unwrap();
        let ev = k.to_dense().symmetric_eigenvalues();
        let gap = ev.iter().map(|v| (v - sigma).abs()).fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 1e-8);
        prop_assert_eq!(count, ev.iter().filter(|&&v| v < sigma).count());
    }

    #[test]
    fn envelope_solve(vals in prop::collection::vec(-1.0..1.0f64, 60)) {
        let n = 20;
        let a = banded(n, &vals, 4.0);
        let perm = reverse_cuthill_mckee(&a.adjacency());
        let f = EnvelopeLdl::factor(&a, &perm).unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = f.solve(&b);
        let r: f64 = a.apply(&x).iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        prop_assert!(r < 1e-12);
        let dense: DMatrix<f64> = a.to_dense();
        let neg = dense.symmetric_eigenvalues().iter().filter(|&&v| v < 0.0).count();
        prop_assert_eq!(f.negatives(), neg);
    }
}
