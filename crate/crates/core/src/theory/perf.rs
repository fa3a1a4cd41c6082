//! Outage probability and average error rate under the SNR
//! `Ω = ρ (Σ a_i²)(Σ b_i²)`, the Cauchy–Schwarz upper bound on the SNR of
//! sorted-pairing reflection.
//!
//! `Z = Y_a Y_b` with `Y ~ Gamma(N, 1)` has density
//! `f_Z(t) = 2/Γ(N)² t^{N−1} K₀(2√t)`. All integrals are taken over
//! `s = √Z`, whose density `4/Γ(N)² s^{2N−1} K₀(2s)` is smooth at the origin.

use super::quad::{integrate, trim_support, QuadOptions};
use super::special::{erfc, gamma_ur, ln_bessel_k0, ln_gamma};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrModel {
    /// `ρ = (P_t/σ_n²) ϱ_t ϱ_r`, linear.
    pub rho: f64,
    pub n: usize,
}

impl SnrModel {
    pub fn new(rho: f64, n: usize) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(invalid("rho", format!("must be positive, got {rho}")));
        }
        if n == 0 {
            return Err(invalid("N", "must be at least 1"));
        }
        Ok(Self { rho, n })
    }
}

/// `ln f_S(s)` for `S = √Z`.
pub fn ln_sqrt_product_density(n: usize, s: f64) -> f64 {
    if s <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let nf = n as f64;
    4f64.ln() - 2.0 * ln_gamma(nf) + (2.0 * nf - 1.0) * s.ln() + ln_bessel_k0(2.0 * s).unwrap_or(f64::NEG_INFINITY)
}

/// `f_Z(t) = 2/Γ(N)² t^{N−1} K₀(2√t)`.
pub fn product_density(n: usize, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = t.sqrt();
    (ln_sqrt_product_density(n, s) - (2.0 * s).ln()).exp()
}

fn support(n: usize) -> (f64, f64) {
    let f = |s: f64, out: &mut [f64]| out[0] = ln_sqrt_product_density(n, s).exp();
    let hi = 4.0 * n as f64 + 80.0;
    let (_, upper) = trim_support(f, 1, 0.0, hi, 1e-18, 4000);
    (0.0, upper)
}

fn mode(n: usize) -> f64 {
    (n as f64 - 0.5).max(0.25)
}

const TIGHT: QuadOptions = QuadOptions {
    abs_tol: 1e-300,
    rel_tol: 1e-11,
    max_intervals: 4000,
};

/// `P(Ω ≤ ω_th)`.
pub fn outage_probability(omega_th: f64, model: SnrModel) -> Result<f64> {
    if !(omega_th >= 0.0) {
        return Err(invalid("omega_th", format!("must be ≥ 0, got {omega_th}")));
    }
    if omega_th == 0.0 {
        return Ok(0.0);
    }
    let n = model.n;
    let u = (omega_th / model.rho).sqrt();
    let (_, hi) = support(n);
    let f = |s: f64| ln_sqrt_product_density(n, s).exp();
    let p = if u <= mode(n) {
        integrate(f, 0.0, u, TIGHT)?.value
    } else if u >= hi {
        1.0
    } else {
        1.0 - integrate(f, u, hi, TIGHT)?.value
    };
    Ok(p.clamp(0.0, 1.0))
}

/// `∫ f_S`, which should equal 1.
pub fn sqrt_product_mass(n: usize) -> Result<f64> {
    let (lo, hi) = support(n);
    Ok(integrate(|s| ln_sqrt_product_density(n, s).exp(), lo, hi, TIGHT)?.value)
}

/// Conditional error probability `Γ(p, q γ) / (2 Γ(p))` at SNR `γ`.
pub fn conditional_ber(gamma: f64, p: f64, q: f64) -> f64 {
    0.5 * upper_gamma_regularized(p, q * gamma)
}

fn upper_gamma_regularized(p: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if p == 0.5 {
        erfc(x.sqrt())
    } else {
        gamma_ur(p, x)
    }
}

/// `E[Γ(p, qΩ)/(2Γ(p))]`; BPSK is `p = 1/2, q = 1`.
pub fn average_ber(model: SnrModel, p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(invalid("p, q", format!("must be positive, got ({p}, {q})")));
    }
    let n = model.n;
    let (_, hi) = support(n);
    let g = |s: f64, out: &mut [f64]| {
        let tail = upper_gamma_regularized(p, q * model.rho * s * s);
        out[0] = if tail > 0.0 {
            (ln_sqrt_product_density(n, s) + tail.ln()).exp()
        } else {
            0.0
        };
    };
    let (lo, up) = trim_support(g, 1, 0.0, hi, 1e-18, 4000);
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-10,
        max_intervals: 4000,
    };
    let v = integrate(
        |s| {
            let mut o = [0.0];
            g(s, &mut o);
            o[0]
        },
        lo,
        up,
        opts,
    )?;
    Ok((0.5 * v.value).clamp(0.0, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_normalized() {
        for n in [1, 2, 4, 16, 64] {
            assert!((sqrt_product_mass(n).unwrap() - 1.0).abs() < 1e-8, "N={n}");
        }
    }

    #[test]
    fn product_density_matches_n1() {
        // N=1: f_Z(t) = 2 K₀(2√t)
        let t = 0.7f64;
        let k0 = super::super::special::bessel_k0(2.0 * t.sqrt()).unwrap();
        assert!((product_density(1, t) - 2.0 * k0).abs() < 1e-14);
    }

    #[test]
    fn outage_limits_and_monotonicity() {
        let m = SnrModel::new(2.0, 8).unwrap();
        assert_eq!(outage_probability(0.0, m).unwrap(), 0.0);
        assert!((outage_probability(1e9, m).unwrap() - 1.0).abs() < 1e-8);
        let mut prev = 0.0;
        for j in 1..40 {
            let p = outage_probability(j as f64 * 5.0, m).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn outage_reference_n1() {
        // N=1: F_Z(t) = 1 − 2√t K₁(2√t)
        let m = SnrModel::new(1.0, 1).unwrap();
        let p = outage_probability(0.5, m).unwrap();
        assert!((p - 0.555_657_476_367_763_96).abs() < 1e-9, "{p}");
    }

    #[test]
    fn ber_limits() {
        let lo = average_ber(SnrModel::new(1e-12, 4).unwrap(), 0.5, 1.0).unwrap();
        assert!((lo - 0.5).abs() < 1e-5);
        let hi = average_ber(SnrModel::new(1e3, 4).unwrap(), 0.5, 1.0).unwrap();
        assert!(hi < 1e-10);
        let mut prev = 0.5;
        for j in 0..10 {
            let rho = 10f64.powf(-2.0 + 0.3 * j as f64);
            let b = average_ber(SnrModel::new(rho, 4).unwrap(), 0.5, 1.0).unwrap();
            assert!(b < prev);
            prev = b;
        }
        assert!(average_ber(SnrModel::new(1.0, 4).unwrap(), 0.0, 1.0).is_err());
    }

    #[test]
    fn bpsk_kernel_is_erfc() {
        let g: f64 = 1.7;
        let e = 0.5 * super::super::special::erfc(g.sqrt());
        assert!((conditional_ber(g, 0.5, 1.0) - e).abs() < 1e-15);
    }
}
