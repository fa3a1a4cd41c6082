use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::phase::BeamformingSolution;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMode {
    Siso,
    Miso,
    Mimo,
}

/// `H Θ̃ G` for all users (K×M).
pub fn equivalent_channel(real: &ChannelRealization, sol: &BeamformingSolution) -> Result<CMat> {
    let (n, m, k) = (real.n(), real.m(), real.k());
    if sol.phase.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "phase has {} elements, channel {n}",
            sol.phase.n()
        )));
    }
    let mut out = CMat::zeros(k, m);
    for kk in 0..k {
        let row: Vec<Complex64> = real.h.row(kk).iter().copied().collect();
        let eff = sol.phase.effective_row(&row, &real.g);
        for mm in 0..m {
            out[(kk, mm)] = eff[mm];
        }
    }
    Ok(out)
}

/// Achievable rate in bits/s/Hz of `sol` on the channel `real`.
///
/// SISO/MISO: `log₂(1 + (P_t/σ_n²)|h^H Θ̃ G w|²)` with user 0 and column 0 of
/// `W`. MIMO: `log₂ det(I + (P_t/σ_n²) H_equ C H_equ^H)` with
/// `C = W Λ W^H`.
pub fn achievable_rate(
    real: &ChannelRealization,
    sol: &BeamformingSolution,
    pt: f64,
    sigma_n_sq: f64,
    mode: RateMode,
) -> Result<f64> {
    let snr = pt / sigma_n_sq;
    let heq = equivalent_channel(real, sol)?;
    let m = real.m();
    if sol.w.nrows() != m {
        return Err(Error::DimensionMismatch(format!(
            "W has {} rows, channel has M = {m}",
            sol.w.nrows()
        )));
    }
    match mode {
        RateMode::Siso | RateMode::Miso => {
            if sol.w.ncols() == 0 {
                return Err(Error::DimensionMismatch("W has no columns".into()));
            }
            let gain = (heq.row(0) * sol.w.column(0))[(0, 0)].norm_sqr();
            Ok((1.0 + snr * gain).log2())
        }
        RateMode::Mimo => {
            let k = real.k();
            if sol.w.ncols() != sol.lambda.len() {
                return Err(Error::DimensionMismatch(format!(
                    "W has {} columns, Λ has {} entries",
                    sol.w.ncols(),
                    sol.lambda.len()
                )));
            }
            let lam = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                sol.lambda.len(),
                sol.lambda.iter().map(|&l| Complex64::new(l, 0.0)),
            ));
            let cov = &sol.w * lam * sol.w.adjoint();
            let hc = &heq * cov * heq.adjoint();
            let mut a = CMat::identity(k, k) + hc * Complex64::new(snr, 0.0);
            a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
            let chol = a
                .cholesky()
                .ok_or_else(|| Error::DimensionMismatch("I + snr·H C H^H is not positive definite".into()))?;
            let ln_det: f64 = (0..k).map(|i| chol.l()[(i, i)].re.ln()).sum::<f64>() * 2.0;
            Ok(ln_det / std::f64::consts::LN_2)
        }
    }
}
