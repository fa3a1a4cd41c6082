use num_complex::Complex64;
use std::f64::consts::TAU;

/// Response of an `m`-antenna uniform linear array, as the row vector
/// `[1, e^{-j2πδ sinψ}, …, e^{-j2πδ(m-1) sinψ}]`.
pub fn steering_ula(m: usize, spacing: f64, psi: f64) -> Vec<Complex64> {
    let step = -TAU * spacing * psi.sin();
    (0..m).map(|i| Complex64::from_polar(1.0, step * i as f64)).collect()
}

/// Response of an `n_x × n_y` uniform rectangular planar array with
/// elevation `phi` and azimuth `varphi`.
///
/// Element `(ix, iy)` lives at flat index `ix * n_y + iy` (row-major in
/// `(n_x, n_y)`); every other routine in the crate uses the same order.
pub fn steering_urpa(n_x: usize, n_y: usize, spacing: f64, phi: f64, varphi: f64) -> Vec<Complex64> {
    let ux = phi.sin() * varphi.cos();
    let uy = phi.cos();
    let mut out = Vec::with_capacity(n_x * n_y);
    for ix in 0..n_x {
        for iy in 0..n_y {
            let arg = -TAU * spacing * (ix as f64 * ux + iy as f64 * uy);
            out.push(Complex64::from_polar(1.0, arg));
        }
    }
    out
}

/// Grid coordinates `(ix, iy)` of flat element index `n`.
pub fn element_coords(n: usize, n_y: usize) -> (usize, usize) {
    (n / n_y, n % n_y)
}
