//! Exponential spatial correlation across RIS elements.
//!
//! Elements `p` and `q` at on-grid Euclidean distance `d(p, q)` are given the
//! correlation `r^{d(p,q)/d_ref}`. Only the scattered parts of `G` and `H` are
//! recolored; line-of-sight parts pass through unchanged.

use super::{element_coords, ChannelRealization, FadingParams, Geometry};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Real symmetric element correlation matrix.
pub fn correlation_matrix(geom: &Geometry, d_ref_over_lambda: f64, base: f64) -> DMatrix<f64> {
    let n = geom.n();
    DMatrix::from_fn(n, n, |p, q| {
        let (px, py) = element_coords(p, geom.n_y);
        let (qx, qy) = element_coords(q, geom.n_y);
        let dx = px as f64 - qx as f64;
        let dy = py as f64 - qy as f64;
        let d = geom.delta_0_over_lambda * (dx * dx + dy * dy).sqrt();
        base.powf(d / d_ref_over_lambda)
    })
}

/// Coloring factor `L` with `L L^T ≈ R` and unit-norm rows, so every element
/// keeps its marginal variance exactly.
#[derive(Debug, Clone)]
pub struct CorrelationFactor {
    factor: DMatrix<f64>,
}

impl CorrelationFactor {
    /// `None` when correlation is disabled (`d_ref = 0`).
    pub fn new(geom: &Geometry, fading: &FadingParams) -> Result<Option<Self>> {
        if fading.d_ref_over_lambda <= 0.0 {
            return Ok(None);
        }
        let r = correlation_matrix(geom, fading.d_ref_over_lambda, fading.corr_base);
        let n = r.nrows();
        let sym = (&r + r.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-9 * n as f64 {
            return Err(Error::NotPositiveSemiDefinite { min_eigenvalue: min });
        }
        let mut factor = eig.eigenvectors.clone();
        for (j, &lam) in eig.eigenvalues.iter().enumerate() {
            let s = lam.max(0.0).sqrt();
            factor.column_mut(j).scale_mut(s);
        }
        for i in 0..n {
            let norm = factor.row(i).norm();
            if norm > 0.0 {
                factor.row_mut(i).scale_mut(1.0 / norm);
            }
        }
        Ok(Some(Self { factor }))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// Recolors the scattered parts of `real`.
    pub fn apply(&self, real: &ChannelRealization) -> ChannelRealization {
        let l = self.factor.map(|x| Complex64::new(x, 0.0));
        let g_nlos = &real.g - &real.g_los;
        let h_nlos = &real.h - &real.h_los;
        let mut out = real.clone();
        out.g = &real.g_los + &l * g_nlos;
        out.h = &real.h_los + h_nlos * l.transpose();
        out
    }
}

/// One-shot form of [`CorrelationFactor::apply`]; identity when disabled.
pub fn apply_correlation(
    real: &ChannelRealization,
    geom: &Geometry,
    fading: &FadingParams,
) -> Result<ChannelRealization> {
    match CorrelationFactor::new(geom, fading)? {
        Some(f) => Ok(f.apply(real)),
        None => Ok(real.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channels, tests::geometry};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn disabled_is_identity() {
        let geom = geometry(2, 4, 4);
        let fading = FadingParams::default();
        let real = sample_channels(&geom, &fading, 1, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let out = apply_correlation(&real, &geom, &fading).unwrap();
        assert_eq!(out.g, real.g);
        assert_eq!(out.h, real.h);
    }

    #[test]
    fn pairwise_value_at_reference_distance() {
        let mut geom = geometry(1, 2, 1);
        geom.delta_0_over_lambda = 1.0;
        let r = correlation_matrix(&geom, 1.0, 0.7);
        assert!((r[(0, 1)] - 0.7).abs() < 1e-15);
        assert_eq!(r[(0, 0)], 1.0);
    }

    #[test]
    fn wide_spacing_is_nearly_independent() {
        let mut geom = geometry(1, 4, 4);
        geom.delta_0_over_lambda = 4.0;
        let r = correlation_matrix(&geom, 1.0, 0.7);
        let mut max_off = 0.0f64;
        for p in 0..16 {
            for q in 0..16 {
                if p != q {
                    max_off = max_off.max(r[(p, q)]);
                }
            }
        }
        assert!((max_off - 0.7f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn factor_preserves_unit_diagonal() {
        for spacing in [4.0, 0.25, 1.0 / 64.0] {
            let mut geom = geometry(1, 8, 8);
            geom.delta_0_over_lambda = spacing;
            let fading = FadingParams {
                d_ref_over_lambda: 1.0,
                ..Default::default()
            };
            let f = CorrelationFactor::new(&geom, &fading).unwrap().unwrap();
            let llt = f.matrix() * f.matrix().transpose();
            for i in 0..64 {
                assert!((llt[(i, i)] - 1.0).abs() < 1e-10);
            }
            if spacing == 0.25 {
                let r = correlation_matrix(&geom, 1.0, 0.7);
                assert!((llt - r).abs().max() < 1e-8);
            }
        }
    }

    #[test]
    fn los_part_unchanged() {
        let mut geom = geometry(2, 4, 4);
        geom.delta_0_over_lambda = 0.25;
        let fading = FadingParams {
            kappa_g: 2.0,
            kappa_h: vec![3.0],
            d_ref_over_lambda: 1.0,
            ..Default::default()
        };
        let real = sample_channels(&geom, &fading, 1, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let out = apply_correlation(&real, &geom, &fading).unwrap();
        assert_eq!(out.g_los, real.g_los);
        assert!((&out.g - &real.g).norm() > 0.0);
    }
}
