use super::special::{bessel_i0e, laguerre_half, marcum_q1_pair};
use crate::error::{invalid, Result};
use std::f64::consts::PI;

/// Rice amplitude with unit second moment and Rician factor `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiceParams {
    kappa: f64,
}

impl RiceParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(invalid("kappa", format!("must be finite and ≥ 0, got {kappa}")));
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Noncentrality `ν = √(κ/(1+κ))`.
    pub fn nu(&self) -> f64 {
        (self.kappa / (1.0 + self.kappa)).sqrt()
    }

    /// Scale `σ = √(1/(2(1+κ)))`.
    pub fn sigma(&self) -> f64 {
        (0.5 / (1.0 + self.kappa)).sqrt()
    }

    /// `ln f(x)` for `x > 0`.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let k = self.kappa;
        let z = 2.0 * (k * (1.0 + k)).sqrt() * x;
        let d = (1.0 + k).sqrt() * x - k.sqrt();
        (2.0 * (1.0 + k) * x).ln() + bessel_i0e(z).ln() - d * d
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// `(F(x), 1 − F(x))` through the Marcum Q-function.
    pub fn cdf_pair(&self, x: f64) -> Result<(f64, f64)> {
        if x <= 0.0 {
            return Ok((0.0, 1.0));
        }
        let a = (2.0 * self.kappa).sqrt();
        let b = (2.0 * (1.0 + self.kappa)).sqrt() * x;
        let (q, p) = marcum_q1_pair(a, b)?;
        Ok((p, q))
    }

    /// `E(a) = √(π/(4(1+κ))) · L_{1/2}(−κ)`.
    pub fn mean(&self) -> f64 {
        (PI / (4.0 * (1.0 + self.kappa))).sqrt() * laguerre_half(-self.kappa)
    }

    /// Interval `[max(0, ν − 14σ), ν + 14σ]` holding all but a negligible
    /// fraction of the mass.
    pub fn support(&self) -> (f64, f64) {
        let (nu, s) = (self.nu(), self.sigma());
        ((nu - 14.0 * s).max(0.0), nu + 14.0 * s)
    }
}
