//! Bessel and Airy values and zeros, checked against the slow oracles.

use std::f64::consts::PI;

use conilay::experiments::oracles::specfun_digest;
use conilay::specfun::{airy_ai, airy_zero, bessel_j0_zero, bessel_pair};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(" k   j0,k               a_k (Ai(-a_k) = 0)");
    for k in 1..=6 {
        println!("{k:>2}   {:.15}  {:.15}", bessel_j0_zero(k)?, airy_zero(k)?);
    }
    for x in [0.5, 2.0, 10.0, 40.0] {
        let p = bessel_pair(x)?;
        let w = p.j1 * p.y0 - p.j0 * p.y1 - 2.0 / (PI * x);
        println!("x = {x:>5}: J0 {:+.12e}  Y0 {:+.12e}  Wronskian error {w:.1e}", p.j0, p.y0);
    }
    println!("Ai(-3) = {:+.15e}", airy_ai(-3.0));
    println!("{:#?}", specfun_digest(12));
    Ok(())
}
