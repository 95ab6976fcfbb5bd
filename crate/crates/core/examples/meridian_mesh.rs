//! Graded mesh of the truncated meridian guide, refined once, written in
//! the text mesh format.

use conilay::geometry::{write_mesh, DomainSpec, Mesh, MeshParams, Shape};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta = 30f64.to_radians();
    let domain = DomainSpec::new(Shape::MeridianGuide, theta, 8.0)?;
    let params = MeshParams { h_near: 0.25, transverse_cells: 6, ..MeshParams::default() };
    let mesh = Mesh::generate(&domain, &params)?;
    mesh.validate(&domain)?;
    let fine = mesh.refine_uniform();
    println!("domain area {:.6}", domain.area());
    for (name, m) in [("coarse", &mesh), ("refined", &fine)] {
        let hmin = (0..m.triangles.len()).map(|t| m.triangle_diameter(t)).fold(f64::INFINITY, f64::min);
        println!("{name:>8}: {} nodes, {} triangles, area {:.6}, smallest diameter {hmin:.2e}", m.nodes.len(), m.triangles.len(), m.area());
    }
    let path = std::env::temp_dir().join("conilay_guide_30.mesh");
    let mut buf = Vec::new();
    write_mesh(&mesh, &mut buf)?;
    std::fs::write(&path, buf)?;
    println!("wrote {}", path.display());
    Ok(())
}
