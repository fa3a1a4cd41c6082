use super::{Architecture, BeamformingSolution, NonDiagonalPhase};
use crate::error::{invalid, Error, Result};
use crate::linalg::{stable_argsort, wrap_phase, CMat, ZERO};
use crate::sdp::{quadratic_form, recover_q, solve_unit_diag_sdp, SdpProblem};
use num_complex::Complex64;

/// Multi-user permutations from entrywise mean amplitudes: `perm_in` sorts
/// `(1/M) Σ_m |g_m|`, `perm_out` sorts `(1/K) Σ_k |h_k|`, both ascending.
pub fn mu_permutations(g: &CMat, h: &CMat) -> (Vec<usize>, Vec<usize>) {
    let gm: Vec<f64> = (0..g.nrows())
        .map(|i| g.row(i).iter().map(|z| z.norm()).sum::<f64>() / g.ncols() as f64)
        .collect();
    let hm: Vec<f64> = (0..h.ncols())
        .map(|i| h.column(i).iter().map(|z| z.norm()).sum::<f64>() / h.nrows() as f64)
        .collect();
    (stable_argsort(&gm), stable_argsort(&hm))
}

/// `Φ_k = diag(h_k^H J_r) J_t G` for every user row of `h`.
pub fn build_phi(h: &CMat, g: &CMat, perm_in: &[usize], perm_out: &[usize]) -> Result<Vec<CMat>> {
    let n = g.nrows();
    if h.ncols() != n || perm_in.len() != n || perm_out.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "G is {}×{}, H is {}×{}, permutations {}/{}",
            n,
            g.ncols(),
            h.nrows(),
            h.ncols(),
            perm_in.len(),
            perm_out.len()
        )));
    }
    Ok((0..h.nrows())
        .map(|k| CMat::from_fn(n, g.ncols(), |i, m| h[(k, perm_out[i])] * g[(perm_in[i], m)]))
        .collect())
}

/// `Σ_k Φ_k Φ_k^H`.
pub fn sum_gain(phi: &[CMat]) -> CMat {
    let n = phi.first().map_or(0, |p| p.nrows());
    phi.iter()
        .fold(CMat::from_element(n, n, ZERO), |acc, p| acc + p * p.adjoint())
}

/// Water-filling over parallel gains `s_k²` with total power 1:
/// `λ_k = max(0, μ − 1/(snr s_k²))`.
pub fn water_filling(s: &[f64], snr: f64) -> Result<Vec<f64>> {
    if !(snr > 0.0) {
        return Err(invalid("snr", format!("must be positive, got {snr}")));
    }
    if s.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(invalid("s", "singular values must be finite and non-negative"));
    }
    let mut inv: Vec<(usize, f64)> = s
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(k, &v)| (k, 1.0 / (snr * v * v)))
        .collect();
    if inv.is_empty() {
        return Err(Error::ZeroChannel("all singular values are zero"));
    }
    inv.sort_by(|a, b| a.1.total_cmp(&b.1));
    // largest active set whose water level clears every floor
    let mut active = inv.len();
    let mut level = 0.0;
    while active > 0 {
        let floor_sum: f64 = inv[..active].iter().map(|p| p.1).sum();
        level = (1.0 + floor_sum) / active as f64;
        if level > inv[active - 1].1 {
            break;
        }
        active -= 1;
    }
    let mut lambda = vec![0.0; s.len()];
    for &(k, f) in &inv[..active] {
        lambda[k] = level - f;
    }
    let total: f64 = lambda.iter().sum();
    lambda.iter_mut().for_each(|l| *l /= total);
    Ok(lambda)
}

/// Output of [`two_stage_mimo`].
#[derive(Debug, Clone)]
pub struct MimoDesign {
    pub solution: BeamformingSolution,
    /// `log2 det(I + snr H_equ C H_equ^H)` on the design channels.
    pub rate: f64,
    /// Relaxed objective `Tr(A Q)`.
    pub sdp_objective: f64,
    /// `q^H A q` after rank-one recovery.
    pub recovered_objective: f64,
    pub sdp_gap: f64,
    pub sdp_iterations: usize,
    /// Singular values of `H_equ`, descending.
    pub singular_values: Vec<f64>,
}

/// Two-stage multi-user design: Stage I fixes the permutations from mean
/// amplitudes and picks phases by semidefinite relaxation of
/// `max Σ_k ‖h_k^H Θ̃ G‖²`; Stage II precodes on the right-singular vectors of
/// `H_equ = H Θ̃ G` with water-filling.
pub fn two_stage_mimo(g: &CMat, h: &CMat, pt: f64, sigma_n_sq: f64, architecture: Architecture) -> Result<MimoDesign> {
    let (n, m, k) = (g.nrows(), g.ncols(), h.nrows());
    if h.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "G has {n} rows, H has {} columns",
            h.ncols()
        )));
    }
    if k == 0 || k > m {
        return Err(invalid("K", format!("need 1 ≤ K ≤ M, got K={k}, M={m}")));
    }
    if !(pt > 0.0 && sigma_n_sq > 0.0) {
        return Err(invalid("power", "Pt and sigma_n_sq must be positive"));
    }
    let (perm_in, perm_out) = match architecture {
        Architecture::NonDiagonal => mu_permutations(g, h),
        Architecture::Conventional => ((0..n).collect(), (0..n).collect()),
        other => return Err(invalid("architecture", format!("{other} has no two-stage design"))),
    };

    let phi = build_phi(h, g, &perm_in, &perm_out)?;
    let a = sum_gain(&phi);
    // the relaxation is scale-invariant; normalizing keeps the gap tolerance meaningful
    let scale = (0..n).map(|i| a[(i, i)].re).sum::<f64>() / n as f64;
    if !(scale > 0.0) {
        return Err(Error::ZeroChannel("Σ Φ_k Φ_k^H"));
    }
    let prob = SdpProblem::new(a.unscale(scale))?;
    let sdp = solve_unit_diag_sdp(&prob)?;
    let q = recover_q(&sdp.q);
    let recovered = quadratic_form(&a, &q);
    let theta: Vec<f64> = q.iter().map(|z| wrap_phase(-z.arg())).collect();
    let phase = NonDiagonalPhase {
        perm_in,
        perm_out,
        theta,
    };

    let heq = CMat::from_fn(k, m, |kk, mm| {
        let row: Vec<Complex64> = h.row(kk).iter().copied().collect();
        let col: Vec<Complex64> = g.column(mm).iter().copied().collect();
        phase.reflect(&row, &col)
    });
    let (s, v) = sorted_svd(&heq);
    let snr = pt / sigma_n_sq;
    let lambda = water_filling(&s, snr)?;
    let w = CMat::from_fn(m, k, |r, c| v[(r, c)]);
    let rate = s
        .iter()
        .zip(&lambda)
        .map(|(sv, l)| (1.0 + snr * l * sv * sv).log2())
        .sum();
    Ok(MimoDesign {
        solution: BeamformingSolution { w, lambda, phase },
        rate,
        sdp_objective: sdp.objective * scale,
        recovered_objective: recovered,
        sdp_gap: sdp.gap,
        sdp_iterations: sdp.iterations,
        singular_values: s,
    })
}

/// First `K` singular values (descending) of the `K×M` matrix `heq`, with
/// the matching right-singular vectors as the columns of an `M×K` matrix.
fn sorted_svd(heq: &CMat) -> (Vec<f64>, CMat) {
    // eigen-decomposition of the Hermitian M×M Gram matrix avoids relying on
    // the ordering conventions of a thin SVD
    let k = heq.nrows();
    let gram = heq.adjoint() * heq;
    let eig = gram.symmetric_eigen();
    let order = {
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        idx
    };
    let s: Vec<f64> = order[..k].iter().map(|&i| eig.eigenvalues[i].max(0.0).sqrt()).collect();
    let v = CMat::from_fn(heq.ncols(), k, |r, c| eig.eigenvectors[(r, order[c])]);
    (s, v)
}
