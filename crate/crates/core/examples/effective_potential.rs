//! The Born–Oppenheimer potential v(x) and its logarithmic cusp at 0⁺.

use conilay::potential1d::{effective_potential, potential_log_asymptote, potential_minimum, verified_x1};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("v(0) = {:.15}", potential_minimum());
    for x in [-4.0, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0, 20.0] {
        let s = effective_potential(x)?;
        println!("x = {x:>5}: v = {:.12}  residual {:.1e}", s.v, s.residual);
    }
    let v0 = potential_minimum();
    for e in [2, 4, 7, 10, 12] {
        let x = 10f64.powi(-e);
        let ratio = (effective_potential(x)?.v - v0) / (potential_log_asymptote(x)? - v0);
        println!("x = 1e-{e:<2}: (v - v(0)) / log asymptote = {ratio:.6}");
    }
    if let Some(x1) = verified_x1(2000)? {
        println!("logarithmic lower bound holds up to x1 = {x1:.6}");
    }
    Ok(())
}
