//! μ₁..μ₄ over a few apertures on the shared reference mesh, next to the
//! two-term small-angle expansions.

use conilay::asymptotics::{mu_two_term, ExpansionVariant};
use conilay::experiments::{compute_sweep, worst_decrease, SweepThetaConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SweepThetaConfig { theta_deg: vec![2.0, 5.0, 10.0, 20.0, 40.0], k: 4, ..SweepThetaConfig::default() };
    let data = compute_sweep(&cfg)?;
    println!("theta  n  mu_n        A           B");
    for row in &data.rows {
        let values = row.values.as_ref().map_err(|e| e.clone())?;
        for (n, v) in values.iter().enumerate() {
            let t = row.theta_deg.to_radians();
            println!(
                "{:>5} {:>2}  {v:.8}  {:.8}  {:.8}",
                row.theta_deg,
                n + 1,
                mu_two_term(n + 1, t, ExpansionVariant::TheoremMain)?,
                mu_two_term(n + 1, t, ExpansionVariant::TheoremCone)?
            );
        }
    }
    println!("largest decrease between consecutive angles: {:.3e}", worst_decrease(&data, cfg.k));
    Ok(())
}
