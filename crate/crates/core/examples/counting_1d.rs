//! Bound states of −∂² − c/x² accumulating at 0, and the slope of their
//! count against |ln E|.

use conilay::asymptotics::{bridge_coupling, counting_coefficient, distance_fit};
use conilay::potential1d::{count_below, threshold_distances, Model1DProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta = 5f64.to_radians();
    let c = bridge_coupling(theta);
    let problem = Model1DProblem::inverse_square(c, 1e6, 4000);
    let e: Vec<f64> = threshold_distances(&problem, 1e-8)?.into_iter().filter(|&v| v <= 1.0).collect();
    for (j, v) in e.iter().enumerate() {
        println!("E_{:<2} = {v:.6e}", j + 1);
    }
    for level in [1e-2, 1e-4, 1e-6, 1e-8] {
        println!("N(E = {level:.0e}) = {}", count_below(&problem, level)?);
    }
    let fit = distance_fit(&e)?;
    println!("c = {c:.6}: slope {:.6}, cot(theta)/(4 pi) = {:.6}", fit.slope, counting_coefficient(theta));
    Ok(())
}
