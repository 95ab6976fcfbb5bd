use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use super::AsymptoticsError;

/// Least-squares line y = slope·x + intercept with Pearson correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub correlation: f64,
    pub points: usize,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit, AsymptoticsError> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(AsymptoticsError::Params(format!("need two or more pairs, got {} and {}", x.len(), y.len())));
    }
    let cov = x.covariance(y);
    let vx = x.variance();
    let vy = y.variance();
    if !(vx > 0.0) {
        return Err(AsymptoticsError::Params("abscissae are all equal".into()));
    }
    let slope = cov / vx;
    let intercept = y.mean() - slope * x.mean();
    let correlation = if vy > 0.0 { cov / (vx * vy).sqrt() } else { 0.0 };
    Ok(LinearFit { slope, intercept, correlation, points: x.len() })
}

fn check(mu: &[f64]) -> Result<(), AsymptoticsError> {
    if let Some(v) = mu.iter().find(|&&v| !(v < 1.0)) {
        return Err(AsymptoticsError::Contract(format!("value {v} is not below the threshold 1")));
    }
    if mu.windows(2).any(|w| w[1] < w[0]) {
        return Err(AsymptoticsError::Contract("values are not sorted".into()));
    }
    Ok(())
}

/// N(E) = #{j : μ_j < 1 − E} for each E of the grid.
pub fn staircase(mu: &[f64], e_grid: &[f64]) -> Result<Vec<usize>, AsymptoticsError> {
    check(mu)?;
    Ok(e_grid.iter().map(|&e| mu.partition_point(|&m| m < 1.0 - e)).collect())
}

/// Jump locations E_j = 1 − μ_j.
pub fn jump_locations(mu: &[f64]) -> Result<Vec<f64>, AsymptoticsError> {
    check(mu)?;
    Ok(mu.iter().map(|m| 1.0 - m).collect())
}

/// Regression of N against |ln E| at the midpoints (in |ln E|) of the
/// steps between consecutive jumps, where N = j on the j-th step.
pub fn staircase_fit(mu: &[f64]) -> Result<LinearFit, AsymptoticsError> {
    let e = jump_locations(mu)?;
    distance_fit(&e)
}

/// Same regression from threshold distances E_1 ≥ E_2 ≥ ... > 0.
pub fn distance_fit(e: &[f64]) -> Result<LinearFit, AsymptoticsError> {
    if e.iter().any(|&v| !(v > 0.0)) {
        return Err(AsymptoticsError::Contract("threshold distances must be positive".into()));
    }
    let x: Vec<f64> = e.windows(2).map(|w| 0.5 * (w[0].ln().abs() + w[1].ln().abs())).collect();
    let y: Vec<f64> = (1..e.len()).map(|j| j as f64).collect();
    linear_fit(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(staircase(&[0.5, 0.9], &[0.05, 0.2, 0.4, 0.6]).unwrap(), vec![2, 1, 1, 0]);
        assert_eq!(staircase(&[], &[0.1, 0.5]).unwrap(), vec![0, 0]);
        assert!(staircase(&[0.5, 1.0], &[0.1]).is_err());
    }

    #[test]
    fn geometric_jumps_fit_exactly() {
        // E_j = e^{-j/a}: N = j exactly on the log scale
        let a = 0.7;
        let e: Vec<f64> = (1..10).map(|j| (-(j as f64) / a).exp()).collect();
        let f = distance_fit(&e).unwrap();
        assert!((f.slope - a).abs() < 1e-12);
        assert!((f.correlation - 1.0).abs() < 1e-12);
    }
}
