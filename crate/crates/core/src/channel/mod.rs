//! Geometric Rician channel model for the BS → RIS → users links.
//!
//! The BS-RIS matrix `G` (N×M) and the per-user RIS rows `h_k^H` (stacked into
//! `H`, K×N) are each a sum of a deterministic line-of-sight part built from
//! array responses and an i.i.d. circular Gaussian scattered part:
//!
//! ```text
//! G = sqrt(κ_g/(1+κ_g)) · sqrt(ϱ_t) f_RIS f_BS^H  +  sqrt(1/(1+κ_g)) · G̃,   G̃_ij ~ CN(0, ϱ_t)
//! ```
//!
//! with `ϱ = C0 · d^{-α}`. All quantities are linear scale.

mod correlation;
mod steering;

pub use correlation::{apply_correlation, correlation_matrix, CorrelationFactor};
pub use steering::{element_coords, steering_ula, steering_urpa};

use crate::error::{invalid, Result};
use crate::linalg::{complex_normal, CMat, CVec};
use num_complex::Complex64;
use rand::Rng;

/// Line-of-sight angles, in radians.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Angles {
    /// BS departure angle.
    pub psi_d: f64,
    /// RIS arrival elevation and azimuth.
    pub phi_a: f64,
    pub varphi_a: f64,
    /// RIS departure elevation and azimuth, one per user.
    pub phi_d: Vec<f64>,
    pub varphi_d: Vec<f64>,
}

impl Angles {
    /// Angles drawn uniformly from `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, users: usize) -> Self {
        let mut draw = || rng.random::<f64>() * std::f64::consts::TAU;
        let psi_d = draw();
        let phi_a = draw();
        let varphi_a = draw();
        let mut phi_d = Vec::with_capacity(users);
        let mut varphi_d = Vec::with_capacity(users);
        for _ in 0..users {
            phi_d.push(draw());
            varphi_d.push(draw());
        }
        Self {
            psi_d,
            phi_a,
            varphi_a,
            phi_d,
            varphi_d,
        }
    }

    fn user(&self, k: usize) -> (f64, f64) {
        let pick = |v: &[f64]| if v.len() == 1 { v[0] } else { v[k] };
        (pick(&self.phi_d), pick(&self.varphi_d))
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Geometry {
    /// BS antennas.
    pub m: usize,
    /// RIS grid; `N = n_x · n_y`.
    pub n_x: usize,
    pub n_y: usize,
    pub delta_a_over_lambda: f64,
    pub delta_0_over_lambda: f64,
    /// BS-RIS distance in metres.
    pub d_t: f64,
    /// RIS-user distances in metres; a single entry is shared by all users.
    pub d_r: Vec<f64>,
    pub angles: Angles,
}

impl Geometry {
    pub fn n(&self) -> usize {
        self.n_x * self.n_y
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(invalid("M", "must be at least 1"));
        }
        if self.n_x == 0 || self.n_y == 0 {
            return Err(invalid("N_x/N_y", "must be at least 1"));
        }
        if !(self.delta_a_over_lambda > 0.0) || !(self.delta_0_over_lambda > 0.0) {
            return Err(invalid("delta", "element spacings must be positive"));
        }
        if !(self.d_t > 0.0) {
            return Err(invalid("d_t", "must be positive"));
        }
        if self.d_r.is_empty() || self.d_r.iter().any(|d| !(*d > 0.0)) {
            return Err(invalid("d_r", "distances must be positive"));
        }
        Ok(())
    }

    fn d_r(&self, k: usize) -> f64 {
        if self.d_r.len() == 1 {
            self.d_r[0]
        } else {
            self.d_r[k]
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FadingParams {
    /// Rician factor of the BS-RIS link (linear).
    pub kappa_g: f64,
    /// Rician factors of the RIS-user links; one entry is shared by all users.
    pub kappa_h: Vec<f64>,
    /// Path loss at 1 m (linear).
    pub c0: f64,
    pub alpha_t: f64,
    pub alpha_r: f64,
    /// CSI error variance on path-loss-normalized entries.
    pub sigma_h_sq: f64,
    /// Correlation reference distance; `0` disables spatial correlation.
    pub d_ref_over_lambda: f64,
    /// Correlation between two elements exactly `d_ref` apart.
    pub corr_base: f64,
}

impl Default for FadingParams {
    fn default() -> Self {
        Self {
            kappa_g: 0.0,
            kappa_h: vec![0.0],
            c0: 1e-3,
            alpha_t: 2.2,
            alpha_r: 2.2,
            sigma_h_sq: 0.0,
            d_ref_over_lambda: 0.0,
            corr_base: 0.7,
        }
    }
}

impl FadingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_g >= 0.0) || self.kappa_h.is_empty() || self.kappa_h.iter().any(|k| !(*k >= 0.0)) {
            return Err(invalid("kappa", "Rician factors must be non-negative"));
        }
        if !(self.c0 > 0.0) {
            return Err(invalid("C0", "must be positive"));
        }
        if !(self.alpha_t > 0.0) || !(self.alpha_r > 0.0) {
            return Err(invalid("alpha", "path-loss exponents must be positive"));
        }
        if !(self.sigma_h_sq >= 0.0) {
            return Err(invalid("sigma_h_sq", "must be non-negative"));
        }
        if !(self.d_ref_over_lambda >= 0.0) {
            return Err(invalid("d_ref_over_lambda", "must be non-negative"));
        }
        if !(self.corr_base > 0.0 && self.corr_base < 1.0) {
            return Err(invalid("corr_base", "must lie in (0, 1)"));
        }
        Ok(())
    }

    fn kappa_h(&self, k: usize) -> f64 {
        if self.kappa_h.len() == 1 {
            self.kappa_h[0]
        } else {
            self.kappa_h[k]
        }
    }
}

/// One coherence interval of channel state.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// BS → RIS, N×M.
    pub g: CMat,
    /// RIS → users, K×N; row `k` is `h_k^H`.
    pub h: CMat,
    /// BS-RIS path loss `ϱ_t`.
    pub rho_t: f64,
    /// RIS-user path losses `ϱ_{r,k}`.
    pub rho_r: Vec<f64>,
    /// Weighted line-of-sight parts of `g` and `h`; the remainder is scattered.
    pub g_los: CMat,
    pub h_los: CMat,
}

impl ChannelRealization {
    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    pub fn m(&self) -> usize {
        self.g.ncols()
    }

    pub fn k(&self) -> usize {
        self.h.nrows()
    }

    /// Column `m` of `G`.
    pub fn g_column(&self, m: usize) -> CVec {
        self.g.column(m).into_owned()
    }

    /// Entries of `h_k^H`.
    pub fn h_row(&self, k: usize) -> CVec {
        self.h.row(k).transpose()
    }

    /// Normalized amplitudes `a_i = |[g_m]_i| / sqrt(ϱ_t)`.
    pub fn amplitudes_g(&self, m: usize) -> Vec<f64> {
        let s = self.rho_t.sqrt();
        self.g.column(m).iter().map(|z| z.norm() / s).collect()
    }

    /// Normalized amplitudes `b_i = |[h_k^H]_i| / sqrt(ϱ_{r,k})`.
    pub fn amplitudes_h(&self, k: usize) -> Vec<f64> {
        let s = self.rho_r[k].sqrt();
        self.h.row(k).iter().map(|z| z.norm() / s).collect()
    }

    /// Builds a deterministic SISO realization from explicit vectors
    /// (`g` is the BS-RIS column, `h_row` the entries of `h^H`).
    pub fn siso(g: &[Complex64], h_row: &[Complex64], rho_t: f64, rho_r: f64) -> Self {
        let n = g.len();
        Self {
            g: CMat::from_column_slice(n, 1, g),
            h: CMat::from_row_slice(1, h_row.len(), h_row),
            rho_t,
            rho_r: vec![rho_r],
            g_los: CMat::zeros(n, 1),
            h_los: CMat::zeros(1, h_row.len()),
        }
    }
}

/// `ϱ = C0 · d^{-α}`.
pub fn path_loss(c0: f64, distance: f64, alpha: f64) -> f64 {
    c0 * distance.powf(-alpha)
}

/// Draws one realization of `G` and `H` for `k` users.
pub fn sample_channels<R: Rng + ?Sized>(
    geom: &Geometry,
    fading: &FadingParams,
    k: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if k == 0 {
        return Err(invalid("K", "at least one user is required"));
    }
    geom.validate()?;
    fading.validate()?;
    if geom.d_r.len() != 1 && geom.d_r.len() != k {
        return Err(invalid(
            "d_r",
            format!("expected 1 or {k} distances, got {}", geom.d_r.len()),
        ));
    }
    if fading.kappa_h.len() != 1 && fading.kappa_h.len() != k {
        return Err(invalid(
            "kappa_h",
            format!("expected 1 or {k} values, got {}", fading.kappa_h.len()),
        ));
    }
    let n = geom.n();
    let m = geom.m;
    let ang = &geom.angles;

    let rho_t = path_loss(fading.c0, geom.d_t, fading.alpha_t);
    let f_bs = steering_ula(m, geom.delta_a_over_lambda, ang.psi_d);
    let f_ris = steering_urpa(geom.n_x, geom.n_y, geom.delta_0_over_lambda, ang.phi_a, ang.varphi_a);

    let los_w = (fading.kappa_g / (1.0 + fading.kappa_g)).sqrt() * rho_t.sqrt();
    let nlos_w = (1.0 / (1.0 + fading.kappa_g)).sqrt();
    let g_los = CMat::from_fn(n, m, |i, j| f_ris[i] * f_bs[j] * los_w);
    let mut g = g_los.clone();
    // column-major fill keeps the draw order "column m, element i"
    for j in 0..m {
        for i in 0..n {
            g[(i, j)] += complex_normal(rng, rho_t) * nlos_w;
        }
    }

    let mut rho_r = Vec::with_capacity(k);
    let mut h_los = CMat::zeros(k, n);
    let mut h = CMat::zeros(k, n);
    for user in 0..k {
        let rr = path_loss(fading.c0, geom.d_r(user), fading.alpha_r);
        rho_r.push(rr);
        let kap = fading.kappa_h(user);
        let (phi, varphi) = ang.user(user);
        let resp = steering_urpa(geom.n_x, geom.n_y, geom.delta_0_over_lambda, phi, varphi);
        let lw = (kap / (1.0 + kap)).sqrt() * rr.sqrt();
        let nw = (1.0 / (1.0 + kap)).sqrt();
        for i in 0..n {
            h_los[(user, i)] = resp[i] * lw;
            h[(user, i)] = h_los[(user, i)] + complex_normal(rng, rr) * nw;
        }
    }

    Ok(ChannelRealization {
        g,
        h,
        rho_t,
        rho_r,
        g_los,
        h_los,
    })
}

/// Adds CSI estimation error: i.i.d. `CN(0, σ_h²·ϱ)` on every entry, i.e.
/// variance `σ_h²` on the path-loss-normalized channel. The returned
/// realization is the estimate; the input stays the ground truth.
pub fn corrupt_csi<R: Rng + ?Sized>(
    real: &ChannelRealization,
    sigma_h_sq: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if !(sigma_h_sq >= 0.0) {
        return Err(invalid("sigma_h_sq", "must be non-negative"));
    }
    let mut est = real.clone();
    if sigma_h_sq == 0.0 {
        return Ok(est);
    }
    let vg = sigma_h_sq * real.rho_t;
    for j in 0..est.m() {
        for i in 0..est.n() {
            est.g[(i, j)] += complex_normal(rng, vg);
        }
    }
    for k in 0..est.k() {
        let vh = sigma_h_sq * real.rho_r[k];
        for i in 0..est.n() {
            est.h[(k, i)] += complex_normal(rng, vh);
        }
    }
    Ok(est)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn geometry(m: usize, n_x: usize, n_y: usize) -> Geometry {
        Geometry {
            m,
            n_x,
            n_y,
            delta_a_over_lambda: 0.5,
            delta_0_over_lambda: 0.5,
            d_t: 50.0,
            d_r: vec![30.0],
            angles: Angles {
                psi_d: 0.3,
                phi_a: 1.1,
                varphi_a: 0.4,
                phi_d: vec![0.8],
                varphi_d: vec![2.0],
            },
        }
    }

    #[test]
    fn path_loss_reference_value() {
        let geom = geometry(2, 4, 4);
        let fading = FadingParams {
            c0: 1e-3,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let real = sample_channels(&geom, &fading, 1, &mut rng).unwrap();
        assert_eq!(real.rho_t, 1e-3 * 50f64.powf(-2.2));
        assert_eq!(real.rho_r[0], 1e-3 * 30f64.powf(-2.2));
    }

    #[test]
    fn deterministic_per_seed() {
        let geom = geometry(3, 4, 2);
        let fading = FadingParams::default();
        let a = sample_channels(&geom, &fading, 2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_channels(&geom, &fading, 2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a.g, b.g);
        assert_eq!(a.h, b.h);
        assert_eq!((a.n(), a.m(), a.k()), (8, 3, 2));
    }

    #[test]
    fn rejects_zero_users() {
        let geom = geometry(1, 2, 2);
        let r = sample_channels(&geom, &FadingParams::default(), 0, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(r.is_err());
    }

    #[test]
    fn los_limit_is_unit_modulus() {
        let geom = geometry(2, 4, 4);
        let fading = FadingParams {
            kappa_g: 1e6,
            kappa_h: vec![1e6],
            ..Default::default()
        };
        let real = sample_channels(&geom, &fading, 1, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        for m in 0..2 {
            for a in real.amplitudes_g(m) {
                assert!((a - 1.0).abs() < 5e-3, "a = {a}");
            }
        }
        for b in real.amplitudes_h(0) {
            assert!((b - 1.0).abs() < 5e-3);
        }
    }

    #[test]
    fn rayleigh_amplitude_moments() {
        let geom = geometry(1, 8, 8);
        let fading = FadingParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut s1, mut s2, mut s4, mut n) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..1600 {
            let real = sample_channels(&geom, &fading, 1, &mut rng).unwrap();
            for a in real.amplitudes_g(0) {
                s1 += a;
                s2 += a * a;
                s4 += a * a * a * a;
                n += 1.0;
            }
        }
        let mean = s1 / n;
        let m2 = s2 / n;
        // Rayleigh with E a² = 1: Var a = 1 - π/4, Var a² = 1
        let se1 = ((1.0 - std::f64::consts::PI / 4.0) / n).sqrt();
        let se2 = ((s4 / n - m2 * m2) / n).sqrt();
        assert!((mean - std::f64::consts::PI.sqrt() / 2.0).abs() < 3.0 * se1);
        assert!((m2 - 1.0).abs() < 3.0 * se2);
    }

    #[test]
    fn csi_error_variance() {
        let geom = geometry(4, 16, 16);
        let fading = FadingParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let truth = sample_channels(&geom, &fading, 1, &mut rng).unwrap();
        assert_eq!(corrupt_csi(&truth, 0.0, &mut rng).unwrap().g, truth.g);
        let mut acc = 0.0;
        let mut count = 0.0;
        let mut acc4 = 0.0;
        for _ in 0..100 {
            let est = corrupt_csi(&truth, 0.1, &mut rng).unwrap();
            for (e, t) in est.g.iter().zip(truth.g.iter()) {
                let d = (e - t).norm_sqr() / truth.rho_t;
                acc += d;
                acc4 += d * d;
                count += 1.0;
            }
        }
        let mean = acc / count;
        let se = ((acc4 / count - mean * mean) / count).sqrt();
        assert!((mean - 0.1).abs() < 3.0 * se, "mean {mean} se {se}");
    }
}
