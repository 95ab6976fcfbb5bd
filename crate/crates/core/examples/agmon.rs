//! Agmon-weighted norm of the ground state and the abscissa beyond which
//! 1% of its mass lies, for decreasing h.

use conilay::experiments::{compute_agmon, leakage_scale, AgmonConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = AgmonConfig { h: vec![0.2, 0.1, 0.05], ..AgmonConfig::default() };
    let data = compute_agmon(&cfg)?;
    println!("x1 = {:.6}", data.x1);
    for r in &data.rows {
        println!(
            "h = {:<5} lambda1 = {:.8}  agmon ratio {:.4}{}  leakage {:.4} (h sqrt|ln h| = {:.4})",
            r.h,
            r.lambda1,
            r.agmon.ratio,
            if r.agmon.clamped { " (clamped)" } else { "" },
            r.leakage,
            leakage_scale(r.h)
        );
    }
    if let Some(f) = &data.leakage_fit {
        println!("leakage against h sqrt|ln h|: slope {:.4}, correlation {:.4}", f.slope, f.correlation);
    }
    Ok(())
}
