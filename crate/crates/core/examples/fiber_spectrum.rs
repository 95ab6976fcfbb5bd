//! Lowest eigenvalues of the meridian problem for the fibers m = 0, 1, 2.
//! Only m = 0 has eigenvalues below the threshold 1.

use conilay::experiments::{meridian_spectrum, Discretization, Frame};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let disc = Discretization::default();
    for deg in [10.0, 30.0, 60.0] {
        let theta = f64::to_radians(deg);
        for m in 0..3 {
            let s = meridian_spectrum(theta, m, 3, 20.0, Frame::Rotated, &disc)?;
            let vals: Vec<String> = s.result.values.iter().map(|v| format!("{v:.6}")).collect();
            println!("theta {deg:>4} deg  m = {m}  dofs {:>6}  mu = {}", s.dofs(), vals.join(", "));
        }
    }
    Ok(())
}
