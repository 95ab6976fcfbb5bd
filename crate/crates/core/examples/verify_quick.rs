//! The cheap acceptance checks, run through the same entry point as
//! `conilay verify`.

use conilay::experiments::{run_verify, VerifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = VerifyConfig { only: vec![3, 6, 7, 8, 10], ..VerifyConfig::default() };
    let report = run_verify(&cfg)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    println!("overall: {}", if report.passed { "PASS" } else { "FAIL" });
    Ok(())
}
