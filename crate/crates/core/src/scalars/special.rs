//! `Γ`, `Γ₁(x|ω)` and the R-matrix normalisation `ρ(u)` in `f64`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `κ = 3/2`.
pub const KAPPA: f64 = 1.5;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Euler `Γ(x)`; errors at the poles `x ∈ {0, −1, −2, …}`.
pub fn gamma(x: f64) -> Result<f64> {
    if is_pole(x) || !x.is_finite() {
        return Err(Error::GammaPole(x));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// `ln |Γ(x)|`, with reflection for `x < 1/2`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_pole(x) || !x.is_finite() {
        return Err(Error::GammaPole(x));
    }
    if x < 0.5 {
        let s = (PI * x).sin().abs();
        Ok(PI.ln() - s.ln() - statrs::function::gamma::ln_gamma(1.0 - x))
    } else {
        Ok(statrs::function::gamma::ln_gamma(x))
    }
}

/// `Γ₁(x|ω) = ω^{x/ω} / √(2πω) · Γ(x/ω)`.
pub fn gamma1(x: f64, omega: f64) -> Result<f64> {
    if omega <= 0.0 {
        return Err(Error::Config(format!("gamma1 period must be positive, got {omega}")));
    }
    let t = x / omega;
    if is_pole(t) {
        return Err(Error::GammaPole(x));
    }
    Ok(omega.powf(t) / (2.0 * PI * omega).sqrt() * gamma(t)?)
}

/// Normalisation of the R-matrix, a ratio of seven `Γ₁` values of period `2κ = 3`:
///
/// `ρ(u) = Γ₁(u)Γ₁(u+κ−1)Γ₁(u+κ+1)Γ₁(u+2κ) / (Γ₁(u+1)Γ₁(u+κ)²Γ₁(u+2κ−1))`.
pub fn rho(u: f64) -> Result<f64> {
    let w = 2.0 * KAPPA;
    let g = |x: f64| gamma1(x, w);
    let num = g(u)? * g(u + KAPPA - 1.0)? * g(u + KAPPA + 1.0)? * g(u + 2.0 * KAPPA)?;
    let gk = g(u + KAPPA)?;
    let den = g(u + 1.0)? * gk * gk * g(u + 2.0 * KAPPA - 1.0)?;
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma1_at_period() {
        let want = 3.0 / (6.0 * PI).sqrt();
        assert!((gamma1(3.0, 3.0).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.690988).abs() < 1e-6);
    }

    #[test]
    fn gamma1_at_twice_period() {
        let want = 9.0 / (6.0 * PI).sqrt();
        assert!((gamma1(6.0, 3.0).unwrap() - want).abs() < 1e-13);
        assert!((want - 2.072965).abs() < 1e-6);
    }

    #[test]
    fn gamma1_shift() {
        let r = gamma1(1.7 + 3.0, 3.0).unwrap() / gamma1(1.7, 3.0).unwrap();
        assert!((r - 1.7).abs() < 1e-12);
        for i in -40..40 {
            let x = i as f64 * 0.37 + 0.011;
            let r = gamma1(x + 3.0, 3.0).unwrap() / gamma1(x, 3.0).unwrap();
            assert!((r / x - 1.0).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(gamma1(0.0, 3.0), Err(Error::GammaPole(_))));
        assert!(matches!(gamma1(-6.0, 3.0), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(-2.0), Err(Error::GammaPole(_))));
        // u = -1 puts Γ₁(u+1) on a pole
        assert!(rho(-1.0).is_err());
    }

    #[test]
    fn gamma_reference_values() {
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(10.0).unwrap() - 362880.0).abs() < 1e-8);
        assert!((ln_gamma(-0.5).unwrap() - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
        assert!((ln_gamma(30.0).unwrap() - gamma(30.0).unwrap().ln()).abs() < 1e-11);
    }

    #[test]
    fn rho_positive_at_half() {
        let r = rho(0.5).unwrap();
        assert!(r.is_finite() && r > 0.0);
    }
}
