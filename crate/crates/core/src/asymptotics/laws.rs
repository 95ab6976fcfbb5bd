use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::specfun::{airy_zero, first_bessel_zero, SpecfunError};

/// cot θ / (4π), the coefficient of |ln E| in the counting law of the layer.
pub fn counting_coefficient(theta: f64) -> f64 {
    1.0 / (theta.tan() * 4.0 * PI)
}

/// cot θ / (4π) · |ln E| for 0 < θ < π/2, 0 < E < 1.
pub fn counting_asymptote(theta: f64, e: f64) -> f64 {
    counting_coefficient(theta) * e.ln().abs()
}

/// (1/2π)√(c − 1/4), the counting coefficient of −∂² − c/x² on (1, ∞);
/// zero when c ≤ 1/4 (finitely many bound states).
pub fn inverse_square_coefficient(c: f64) -> f64 {
    if c > 0.25 {
        (c - 0.25).sqrt() / (2.0 * PI)
    } else {
        0.0
    }
}

/// The coupling 1/(4 sin²θ) for which the two coefficients above coincide.
pub fn bridge_coupling(theta: f64) -> f64 {
    0.25 / theta.sin().powi(2)
}

/// Two readings of the θ^{2/3} coefficient of μ_n(θ): `TheoremMain` uses
/// (2j₀,₁)^{2/3}, `TheoremCone` uses (2j₀,₁²)^{2/3}, which is what the
/// triangle expansion gives after μ = 2cos²θ·λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpansionVariant {
    TheoremMain,
    TheoremCone,
}

impl ExpansionVariant {
    pub const ALL: [ExpansionVariant; 2] = [ExpansionVariant::TheoremMain, ExpansionVariant::TheoremCone];

    pub fn label(self) -> &'static str {
        match self {
            ExpansionVariant::TheoremMain => "A",
            ExpansionVariant::TheoremCone => "B",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub beta0: f64,
    pub beta2: f64,
    pub variant: ExpansionVariant,
}

impl ExpansionCoefficients {
    /// Coefficients of μ_n(θ) ≈ β₀ + β₂ θ^{2/3}.
    pub fn mu(n: usize, variant: ExpansionVariant) -> Result<Self, SpecfunError> {
        let j = first_bessel_zero();
        let z = airy_zero(n)?;
        let base = match variant {
            ExpansionVariant::TheoremMain => 2.0 * j,
            ExpansionVariant::TheoremCone => 2.0 * j * j,
        };
        Ok(Self { beta0: j * j / (PI * PI), beta2: base.powf(2.0 / 3.0) * z / (PI * PI), variant })
    }

    /// Coefficients of the triangle eigenvalues λ_n^Δ(h) ≈ β₀ + β₂ h^{2/3}.
    pub fn lambda(n: usize) -> Result<Self, SpecfunError> {
        let j = first_bessel_zero();
        let z = airy_zero(n)?;
        let d = 2.0 * PI * PI;
        Ok(Self { beta0: j * j / d, beta2: (2.0 * j * j).powf(2.0 / 3.0) * z / d, variant: ExpansionVariant::TheoremCone })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.beta0 + self.beta2 * t.powf(2.0 / 3.0)
    }
}

pub fn mu_two_term(n: usize, theta: f64, variant: ExpansionVariant) -> Result<f64, SpecfunError> {
    Ok(ExpansionCoefficients::mu(n, variant)?.eval(theta))
}

pub fn lambda_delta_expansion(n: usize, h: f64) -> Result<f64, SpecfunError> {
    Ok(ExpansionCoefficients::lambda(n)?.eval(h))
}

/// μ → λ = μ / (2cos²θ), returned with the matching h = tan θ.
pub fn mu_to_lambda(mu: f64, theta: f64) -> (f64, f64) {
    (mu / (2.0 * theta.cos().powi(2)), theta.tan())
}

pub fn lambda_to_mu(lambda: f64, theta: f64) -> f64 {
    lambda * 2.0 * theta.cos().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridge_identity() {
        for i in 1..90 {
            let t = (i as f64).to_radians();
            let a = counting_coefficient(t);
            let b = inverse_square_coefficient(bridge_coupling(t));
            assert!((a - b).abs() <= 1e-13 * a.max(1.0), "{i} {a} {b}");
        }
    }

    #[test]
    fn variant_ratio() {
        let a = ExpansionCoefficients::mu(1, ExpansionVariant::TheoremMain).unwrap();
        let b = ExpansionCoefficients::mu(1, ExpansionVariant::TheoremCone).unwrap();
        assert!((b.beta2 / a.beta2 - first_bessel_zero().powf(2.0 / 3.0)).abs() < 1e-14);
        assert_eq!(a.eval(0.0), a.beta0);
    }
}
