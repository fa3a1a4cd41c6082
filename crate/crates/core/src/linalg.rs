//! Small complex linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CVec = DVector<Complex64>;
pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Circularly-symmetric complex Gaussian sample with the given variance.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Indices that sort `values` ascending. Ties keep the lower original index first.
pub fn stable_argsort(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    // sort_by is stable
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Phase of `z`, with the convention that a zero entry has phase 0.
pub fn phase_or_zero(z: Complex64) -> f64 {
    if z.norm_sqr() == 0.0 {
        0.0
    } else {
        z.arg()
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let t = theta.rem_euclid(two_pi);
    if t >= two_pi {
        0.0
    } else {
        t
    }
}

/// `true` when `m` admits a Cholesky factorization (Hermitian positive definite).
pub fn is_positive_definite(m: &CMat) -> bool {
    m.clone().cholesky().is_some()
}

/// Eigenpair with the largest eigenvalue of a Hermitian matrix.
pub fn leading_eigenpair(m: &CMat) -> (f64, CVec) {
    let eig = m.clone().symmetric_eigen();
    let (mut best, mut best_val) = (0usize, f64::NEG_INFINITY);
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    (best_val, eig.eigenvectors.column(best).into_owned())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMat) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `(M + M^H) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Real part of the trace of `a * b` without forming the product.
pub fn re_trace_product(a: &CMat, b: &CMat) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..a.ncols() {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// Squared Euclidean norm of a complex row/column.
pub fn norm_sqr<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    entries.into_iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argsort_is_stable_on_ties() {
        assert_eq!(stable_argsort(&[1.0, 1.0, 0.5, 1.0]), vec![2, 0, 1, 3]);
        assert_eq!(stable_argsort(&[2.0, 2.0, 2.0]), vec![0, 1, 2]);
    }

    #[test]
    fn wrap_phase_range() {
        use std::f64::consts::{PI, TAU};
        assert!((wrap_phase(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert_eq!(wrap_phase(TAU), 0.0);
        assert!(wrap_phase(-1e-18) < TAU);
    }

    #[test]
    fn leading_eigenpair_of_rank_one() {
        let v = CVec::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, 0.3),
            Complex64::from_polar(1.0, -1.2),
        ]);
        let m = &v * v.adjoint();
        let (val, vec) = leading_eigenpair(&m);
        assert!((val - 3.0).abs() < 1e-12);
        let overlap = (vec.adjoint() * &v)[(0, 0)].norm();
        assert!((overlap - 3f64.sqrt()).abs() < 1e-12);
    }
}
