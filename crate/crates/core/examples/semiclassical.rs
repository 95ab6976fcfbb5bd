//! λ₁..λ₃ of the scaled guide, the triangle bound above, the
//! Born–Oppenheimer values below and the Airy expansion.

use conilay::experiments::{compute_semiclassical, SemiclassicalConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SemiclassicalConfig { h: vec![0.3, 0.2, 0.1], ..SemiclassicalConfig::default() };
    println!("  h    n  BO          lambda      triangle    expansion");
    for r in compute_semiclassical(&cfg)? {
        for n in 0..r.lambda.len() {
            let get = |v: &[f64]| v.get(n).map_or("-".into(), |x| format!("{x:.8}"));
            println!("{:>4} {:>2}  {}  {:.8}  {}  {}", r.h, n + 1, get(&r.bo), r.lambda[n], get(&r.lambda_triangle), get(&r.expansion));
        }
    }
    Ok(())
}
