use super::siso::coherent_phase;
use super::{Architecture, NonDiagonalPhase};
use crate::error::{invalid, Error, Result};
use crate::linalg::{complex_normal, stable_argsort, CMat, CVec};
use num_complex::Complex64;
use rand::Rng;

/// Starting beamformer for the alternating optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WInit {
    /// Normalized vector of the column means of `G`.
    #[default]
    MeanColumn,
    /// First column of the identity: only antenna 0 active.
    FirstColumn,
    /// Isotropic random direction drawn from the supplied rng.
    Random,
}

impl std::str::FromStr for WInit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean-column" => Ok(WInit::MeanColumn),
            "first-column" => Ok(WInit::FirstColumn),
            "random" => Ok(WInit::Random),
            _ => Err(Error::Config(format!("unknown w init `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AltOptOptions {
    /// Stop once the relative objective increment drops below this.
    pub eps: f64,
    pub max_iter: usize,
    pub init: WInit,
    /// `Conventional` keeps identity permutations (diagonal baseline).
    pub architecture: Architecture,
}

impl Default for AltOptOptions {
    fn default() -> Self {
        Self {
            eps: 1e-4,
            max_iter: 50,
            init: WInit::MeanColumn,
            architecture: Architecture::NonDiagonal,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AltOptResult {
    pub phase: NonDiagonalPhase,
    pub w: CVec,
    /// `|h^H Θ̃ G w|²` after each phase update; entry 0 uses the initial `w`.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl AltOptResult {
    pub fn objective(&self) -> f64 {
        *self.trace.last().expect("trace is never empty")
    }
}

fn initial_w<R: Rng + ?Sized>(g: &CMat, init: WInit, rng: &mut R) -> Result<CVec> {
    let m = g.ncols();
    let w = match init {
        WInit::MeanColumn => g.row_sum().transpose() / Complex64::new(g.nrows() as f64, 0.0),
        WInit::FirstColumn => CVec::from_fn(m, |i, _| {
            if i == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
        WInit::Random => CVec::from_fn(m, |_, _| complex_normal(rng, 1.0)),
    };
    let norm = w.norm();
    if norm == 0.0 || !norm.is_finite() {
        // degenerate start (e.g. columns cancelling): fall back to e_1
        let mut e = CVec::zeros(m);
        e[0] = Complex64::new(1.0, 0.0);
        return Ok(e);
    }
    Ok(w.unscale(norm))
}

/// Alternating optimization of the RIS configuration and the MISO transmit
/// beamformer for a single user with channel row `h_row`.
///
/// `perm_out` is fixed once from `|h|`; every pass re-sorts `|G w|` to pick
/// `perm_in`, co-phases, then applies MRT.
pub fn alt_opt_miso<R: Rng + ?Sized>(
    g: &CMat,
    h_row: &[Complex64],
    opts: &AltOptOptions,
    rng: &mut R,
) -> Result<AltOptResult> {
    let n = g.nrows();
    if h_row.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "G has {n} rows, h has {}",
            h_row.len()
        )));
    }
    if n == 0 || g.ncols() == 0 {
        return Err(invalid("G", "empty channel matrix"));
    }
    if !(opts.eps > 0.0) {
        return Err(invalid("eps", format!("must be positive, got {}", opts.eps)));
    }
    if opts.max_iter == 0 {
        return Err(invalid("max_iter", "must be at least 1"));
    }
    let nondiag = match opts.architecture {
        Architecture::NonDiagonal => true,
        Architecture::Conventional => false,
        other => return Err(invalid("architecture", format!("{other} has no alternating design"))),
    };
    let identity: Vec<usize> = (0..n).collect();
    let perm_out = if nondiag {
        stable_argsort(&h_row.iter().map(|z| z.norm()).collect::<Vec<_>>())
    } else {
        identity.clone()
    };

    let mut w = initial_w(g, opts.init, rng)?;
    let mut trace = Vec::with_capacity(opts.max_iter + 1);
    let mut phase = NonDiagonalPhase::diagonal(vec![0.0; n]);
    let mut converged = false;
    let mut iterations = 0;
    let m = g.ncols();

    for it in 0..opts.max_iter {
        iterations = it + 1;
        let gw: Vec<Complex64> = (g * &w).iter().copied().collect();
        let perm_in = if nondiag {
            stable_argsort(&gw.iter().map(|z| z.norm()).collect::<Vec<_>>())
        } else {
            identity.clone()
        };
        phase = coherent_phase(&gw, h_row, perm_in, perm_out.clone());
        if it == 0 {
            trace.push(phase.reflect(h_row, &gw).norm_sqr());
        }
        let row = phase.effective_row(h_row, g);
        let norm = row.norm();
        if norm == 0.0 {
            return Err(Error::ZeroChannel("h^H Θ G"));
        }
        w = CVec::from_fn(m, |i, _| row[i].conj() / norm);
        let obj = norm * norm;
        let prev = *trace.last().unwrap();
        trace.push(obj);
        if m == 1 || obj - prev < opts.eps * prev.abs() {
            converged = true;
            break;
        }
    }

    Ok(AltOptResult {
        phase,
        w,
        trace,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{channel_gain, nondiag_siso};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_instance(n: usize, m: usize, seed: u64) -> (CMat, Vec<Complex64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CMat::from_fn(n, m, |_, _| complex_normal(&mut rng, 1.0));
        let h = (0..n).map(|_| complex_normal(&mut rng, 1.0)).collect();
        (g, h)
    }

    #[test]
    fn single_antenna_matches_siso() {
        let (g, h) = random_instance(12, 1, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let res = alt_opt_miso(&g, &h, &AltOptOptions::default(), &mut rng).unwrap();
        assert_eq!(res.iterations, 1);
        let gv: Vec<Complex64> = g.column(0).iter().copied().collect();
        let siso = channel_gain(&h, &nondiag_siso(&gv, &h), &gv).unwrap();
        assert!((res.objective() - siso).abs() < 1e-10 * siso);
        assert_eq!(res.phase.perm_in, nondiag_siso(&gv, &h).perm_in);
    }

    #[test]
    fn objective_non_decreasing() {
        for seed in 0..10 {
            let (g, h) = random_instance(16, 4, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let res = alt_opt_miso(&g, &h, &AltOptOptions::default(), &mut rng).unwrap();
            for w in res.trace.windows(2) {
                assert!(w[1] >= w[0] * (1.0 - 1e-12), "{:?}", res.trace);
            }
            assert!((res.w.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn final_objective_matches_recomputation() {
        let (g, h) = random_instance(8, 3, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let res = alt_opt_miso(&g, &h, &AltOptOptions::default(), &mut rng).unwrap();
        let gw: Vec<Complex64> = (&g * &res.w).iter().copied().collect();
        let direct = channel_gain(&h, &res.phase, &gw).unwrap();
        assert!((direct - res.objective()).abs() < 1e-10 * direct);
    }

    #[test]
    fn conventional_keeps_identity() {
        let (g, h) = random_instance(8, 2, 3);
        let opts = AltOptOptions {
            architecture: Architecture::Conventional,
            ..Default::default()
        };
        let res = alt_opt_miso(&g, &h, &opts, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(res.phase.is_diagonal());
        assert_eq!(res.phase.perm_in, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn zero_channel_is_error() {
        let g = CMat::zeros(4, 2);
        let h = vec![Complex64::new(1.0, 0.0); 4];
        let err = alt_opt_miso(&g, &h, &AltOptOptions::default(), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(matches!(err, Err(Error::ZeroChannel(_))));
    }

    #[test]
    fn init_variants_all_run() {
        let (g, h) = random_instance(8, 4, 11);
        for init in [WInit::MeanColumn, WInit::FirstColumn, WInit::Random] {
            let opts = AltOptOptions {
                init,
                ..Default::default()
            };
            let res = alt_opt_miso(&g, &h, &opts, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
            assert!(res.objective() > 0.0);
        }
        assert_eq!("random".parse::<WInit>().unwrap(), WInit::Random);
    }
}
