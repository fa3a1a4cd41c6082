use super::rice::RiceParams;
use super::special::{gamma_fn, laguerre_half};
use crate::error::{invalid, Result};
use std::f64::consts::PI;

/// Average gain of co-phased diagonal reflection, in units of `ϱ_t ϱ_r`:
/// `N + (π²/16) N(N−1) L²_{1/2}(−κ_g) L²_{1/2}(−κ_h) / ((κ_g+1)(κ_h+1))`.
pub fn diag_gain_rician(n: usize, kappa_g: f64, kappa_h: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    RiceParams::new(kappa_g)?;
    RiceParams::new(kappa_h)?;
    let nf = n as f64;
    Ok(nf + PI * PI / 16.0 * nf * (nf - 1.0) * l_factor(kappa_g, kappa_h))
}

fn l_factor(kg: f64, kh: f64) -> f64 {
    laguerre_half(-kg).powi(2) * laguerre_half(-kh).powi(2) / ((kg + 1.0) * (kh + 1.0))
}

/// Leading-order gains as `N → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPair {
    pub diag: f64,
    pub nondiag: f64,
}

/// `(π²/16) N² · L-factor` for diagonal reflection and `N²` for sorted pairing.
pub fn asymptotic_gains(n: usize, kappa_g: f64, kappa_h: f64) -> Result<GainPair> {
    RiceParams::new(kappa_g)?;
    RiceParams::new(kappa_h)?;
    let n2 = (n * n) as f64;
    Ok(GainPair {
        diag: PI * PI / 16.0 * n2 * l_factor(kappa_g, kappa_h),
        nondiag: n2,
    })
}

/// Fully connected reference gain under Rayleigh fading: `E[‖g‖²‖h‖²] = N²`.
pub fn fully_gain_rayleigh(n: usize) -> f64 {
    (n * n) as f64
}

/// Group-connected reference gain under Rayleigh fading with groups of `G`:
/// `(N/G) G² + (N/G)(N/G − 1) (Γ(G+½)/Γ(G))⁴`.
pub fn group_gain_rayleigh(n: usize, group: usize) -> Result<f64> {
    if group == 0 || !n.is_multiple_of(group) {
        return Err(invalid("group_size", format!("{group} does not divide N = {n}")));
    }
    let groups = (n / group) as f64;
    let g = group as f64;
    let ratio = gamma_fn(g + 0.5) / gamma_fn(g);
    Ok(groups * g * g + groups * (groups - 1.0) * ratio.powi(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_closed_form_values() {
        assert!((diag_gain_rician(1, 3.0, 0.2).unwrap() - 1.0).abs() < 1e-15);
        let g = diag_gain_rician(16, 0.0, 0.0).unwrap();
        assert!((g - (16.0 + 240.0 * PI * PI / 16.0)).abs() < 1e-12);
        assert!((g / 256.0 - 0.6408).abs() < 1e-4);
        assert!(diag_gain_rician(4, -1.0, 0.0).is_err());
    }

    #[test]
    fn asymptotes() {
        let a = asymptotic_gains(10, 0.0, 0.0).unwrap();
        assert!((a.diag / 100.0 - PI * PI / 16.0).abs() < 1e-15);
        assert_eq!(a.nondiag, 100.0);
        let los = asymptotic_gains(10, 1e6, 1e6).unwrap();
        assert!((los.diag / 100.0 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn group_reference() {
        assert_eq!(group_gain_rayleigh(8, 8).unwrap(), 64.0);
        // singleton groups reduce to the diagonal Rayleigh gain
        let conv = diag_gain_rician(8, 0.0, 0.0).unwrap();
        assert!((group_gain_rayleigh(8, 1).unwrap() - conv).abs() < 1e-12);
        assert!(group_gain_rayleigh(8, 3).is_err());
    }
}
