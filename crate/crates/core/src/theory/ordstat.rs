//! Order statistics of Rice amplitudes and the exact Rayleigh special case.

use super::quad::{integrate_vec, trim_support, QuadOptions};
use super::rice::RiceParams;
use super::special::ln_gamma;
use crate::error::{invalid, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;

/// First and second moments of every order statistic `a_(1) ≤ … ≤ a_(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatMoments {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

fn ln_binomial_weight(i: usize, n: usize) -> f64 {
    // N! / ((i−1)! (N−i)!)
    ln_gamma(n as f64 + 1.0) - ln_gamma(i as f64) - ln_gamma((n - i) as f64 + 1.0)
}

/// Evaluates `x^m f_(i)(x)` for the requested `(i, m)` pairs at one point.
fn ordstat_integrand(rice: &RiceParams, n: usize, wanted: &[(usize, i32)], ln_c: &[f64], x: f64, out: &mut [f64]) {
    let lf = rice.ln_pdf(x);
    let (f, s) = rice.cdf_pair(x).unwrap_or((f64::NAN, f64::NAN));
    let (lnf, lns) = (f.ln(), s.ln());
    for (slot, &(i, m)) in out.iter_mut().zip(wanted) {
        if !lf.is_finite() {
            *slot = 0.0;
            continue;
        }
        let mut l = ln_c[i - 1] + lf;
        if i > 1 {
            l += (i - 1) as f64 * lnf;
        }
        if n > i {
            l += (n - i) as f64 * lns;
        }
        *slot = x.powi(m) * l.exp();
    }
}

fn moments_for(n: usize, kappa: f64, wanted: &[(usize, i32)]) -> Result<Vec<f64>> {
    let rice = RiceParams::new(kappa)?;
    let ln_c: Vec<f64> = (1..=n).map(|i| ln_binomial_weight(i, n)).collect();
    let dim = wanted.len();
    let f = |x: f64, out: &mut [f64]| ordstat_integrand(&rice, n, wanted, &ln_c, x, out);
    let (lo, hi) = rice.support();
    let (lo, hi) = trim_support(f, dim, lo, hi, 1e-16, 400);
    let opts = QuadOptions {
        abs_tol: 1e-11,
        rel_tol: 1e-13,
        max_intervals: 4000,
    };
    let (v, _) = integrate_vec(f, dim, lo, hi, opts)?;
    Ok(v)
}

/// `E(a_(i)^order)` for the `i`-th smallest of `n` i.i.d. Rice amplitudes.
pub fn ordstat_moment(i: usize, n: usize, kappa: f64, order: u32) -> Result<f64> {
    if i == 0 || i > n {
        return Err(invalid("i", format!("need 1 ≤ i ≤ N, got i={i}, N={n}")));
    }
    if order != 1 && order != 2 {
        return Err(invalid("order", format!("must be 1 or 2, got {order}")));
    }
    moments_for(n, kappa, &[(i, order as i32)]).map(|v| v[0])
}

/// All first and second order-statistic moments in one vector quadrature.
pub fn ordstat_moments(n: usize, kappa: f64) -> Result<OrderStatMoments> {
    if n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    let wanted: Vec<(usize, i32)> = (1..=n).flat_map(|i| [(i, 1), (i, 2)]).collect();
    let v = moments_for(n, kappa, &wanted)?;
    Ok(OrderStatMoments {
        first: v.iter().step_by(2).copied().collect(),
        second: v.iter().skip(1).step_by(2).copied().collect(),
    })
}

/// Sorted-pairing gain `Σ_i E(a_(i)²)E(b_(i)²) + 2Σ_{i<j} E(a_(i))E(b_(i))E(a_(j))E(b_(j))`
/// in units of `ϱ_t ϱ_r`.
pub fn nondiag_gain_from_moments(a: &OrderStatMoments, b: &OrderStatMoments) -> f64 {
    let diag: f64 = a.second.iter().zip(&b.second).map(|(x, y)| x * y).sum();
    let prods: Vec<f64> = a.first.iter().zip(&b.first).map(|(x, y)| x * y).collect();
    let total: f64 = prods.iter().sum();
    let sq: f64 = prods.iter().map(|p| p * p).sum();
    diag + total * total - sq
}

/// [`nondiag_gain_from_moments`] with moments from quadrature.
pub fn nondiag_gain_rician(n: usize, kappa_g: f64, kappa_h: f64) -> Result<f64> {
    let a = ordstat_moments(n, kappa_g)?;
    let b = if kappa_h == kappa_g {
        a.clone()
    } else {
        ordstat_moments(n, kappa_h)?
    };
    Ok(nondiag_gain_from_moments(&a, &b))
}

fn pascal(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for r in 1..=n {
        let prev = &rows[r - 1];
        let mut row = vec![BigUint::one(); r + 1];
        for k in 1..r {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// `S_i = Σ_{k<i} (−1)^k C(N, i−k−1) C(N−i+k, k) / √(N−i+k+1)`, so that the
/// Rayleigh order-statistic mean is `E(a_(i)) = (√π/2) S_i`.
///
/// The alternating sum cancels catastrophically in floating point, so it is
/// evaluated exactly in big-integer fixed point and rounded once at the end.
pub fn rayleigh_mean_coefficients(n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let binom = pascal(n);
    let frac_bits = 2 * n + 128;
    let one = BigUint::one() << (2 * frac_bits);
    let inv_sqrt: Vec<BigInt> = (0..=n + 1)
        .map(|m| {
            if m == 0 {
                BigInt::zero()
            } else {
                BigInt::from((&one / BigUint::from(m)).sqrt())
            }
        })
        .collect();
    let shift = frac_bits - 64;
    (1..=n)
        .map(|i| {
            let mut acc = BigInt::zero();
            for k in 0..i {
                let m = n - i + k;
                let coef = BigInt::from(&binom[n][i - k - 1] * &binom[m][k]);
                let term = coef * &inv_sqrt[m + 1];
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let top = (acc >> shift).to_f64().unwrap_or(f64::NAN);
            top * 2f64.powi(-64)
        })
        .collect()
}

/// Exact Rayleigh order-statistic moments: first moments from
/// [`rayleigh_mean_coefficients`], second moments `Σ_{k≤i} 1/(N−k+1)`.
pub fn rayleigh_ordstat_moments(n: usize) -> OrderStatMoments {
    let first = rayleigh_mean_coefficients(n)
        .into_iter()
        .map(|s| 0.5 * PI.sqrt() * s)
        .collect();
    let mut second = Vec::with_capacity(n);
    let mut h = 0.0;
    for k in 1..=n {
        h += 1.0 / (n - k + 1) as f64;
        second.push(h);
    }
    OrderStatMoments { first, second }
}

/// Sorted-pairing gain under Rayleigh fading on both links:
/// `Σ_i H_i² + (π²/8) Σ_{i<j} S_i² S_j²`.
pub fn nondiag_gain_rayleigh(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    let m = rayleigh_ordstat_moments(n);
    Ok(nondiag_gain_from_moments(&m, &m))
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Density of the `i`-th smallest of `n` unit-power Rayleigh amplitudes as a
/// signed mixture of `i` Rayleigh densities with scales `1/√(2(N−i+k+1))`.
pub fn ordstat_rayleigh_pdf(i: usize, n: usize, x: f64) -> f64 {
    assert!(i >= 1 && i <= n, "order index out of range");
    if x <= 0.0 {
        return 0.0;
    }
    // Neumaier-compensated sum
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 0..i {
        let m = (n - i + k + 1) as f64;
        let c = binomial_f64(n, i - k - 1) * binomial_f64(n - i + k, k);
        let term = if k % 2 == 0 { c } else { -c } * 2.0 * m * x * (-m * x * x).exp();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// Generic order-statistic density `C F^{i−1} (1−F)^{N−i} f` for the
/// unit-power Rayleigh law.
pub fn ordstat_rayleigh_pdf_beta(i: usize, n: usize, x: f64) -> f64 {
    assert!(i >= 1 && i <= n, "order index out of range");
    if x <= 0.0 {
        return 0.0;
    }
    let lnf = (2.0 * x).ln() - x * x;
    let ln_cdf = (-(-x * x).exp_m1()).ln();
    let ln_sf = -x * x;
    (ln_binomial_weight(i, n) + (i - 1) as f64 * ln_cdf + (n - i) as f64 * ln_sf + lnf).exp()
}
