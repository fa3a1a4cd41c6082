//! RIS phase configurations and transmit beamforming designs.
//!
//! A non-diagonal configuration is stored as two permutations and a phase
//! vector, `Θ̃ = J_r · diag(e^{jθ}) · J_t`, where `(J_t g)_i = g[perm_in[i]]`
//! and `(h^H J_r)_i = h^H[perm_out[i]]`. The signal arriving on element
//! `perm_in[i]` leaves through element `perm_out[i]` after a phase shift
//! `θ_i`. The conventional diagonal RIS is the case of identity permutations.

mod baseline;
mod mimo;
mod miso;
mod siso;

pub use baseline::{baseline_gains, BaselineGains};
pub use mimo::{build_phi, mu_permutations, sum_gain, two_stage_mimo, water_filling, MimoDesign};
pub use miso::{alt_opt_miso, AltOptOptions, AltOptResult, WInit};
pub use siso::{diag_phases_siso, nondiag_siso, sort_permutations};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, ZERO};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// RIS architecture tag used by designs and the experiment harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Architecture {
    /// Diagonal phase-shift matrix.
    Conventional,
    /// Permutation-times-diagonal phase-shift matrix.
    NonDiagonal,
    /// Fully-connected reference architecture (gain only).
    FullyConnected,
    /// Group-connected reference architecture with the given group size (gain only).
    GroupConnected(usize),
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Architecture::Conventional => write!(f, "conventional"),
            Architecture::NonDiagonal => write!(f, "nondiag"),
            Architecture::FullyConnected => write!(f, "fully"),
            Architecture::GroupConnected(g) => write!(f, "group({g})"),
        }
    }
}

impl serde::Serialize for Architecture {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "conventional" | "diag" => Ok(Architecture::Conventional),
            "nondiag" | "proposed" => Ok(Architecture::NonDiagonal),
            "fully" => Ok(Architecture::FullyConnected),
            _ => {
                let inner = t
                    .strip_prefix("group(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Config(format!("unknown architecture `{t}`")))?;
                let g: usize = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad group size in `{t}`")))?;
                if g == 0 {
                    return Err(Error::Config("group size must be at least 1".into()));
                }
                Ok(Architecture::GroupConnected(g))
            }
        }
    }
}

/// `(perm_in, perm_out, θ)` representation of a permutation-structured RIS.
#[derive(Debug, Clone, PartialEq)]
pub struct NonDiagonalPhase {
    pub perm_in: Vec<usize>,
    pub perm_out: Vec<usize>,
    /// Phases in `[0, 2π)`.
    pub theta: Vec<f64>,
}

impl NonDiagonalPhase {
    pub fn new(perm_in: Vec<usize>, perm_out: Vec<usize>, theta: Vec<f64>) -> Result<Self> {
        let n = theta.len();
        if perm_in.len() != n || perm_out.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "permutations of length {}/{} for {} phases",
                perm_in.len(),
                perm_out.len(),
                n
            )));
        }
        if !is_permutation(&perm_in) || !is_permutation(&perm_out) {
            return Err(Error::InvalidParameter {
                name: "perm",
                reason: "not a bijection of 0..N".into(),
            });
        }
        Ok(Self {
            perm_in,
            perm_out,
            theta,
        })
    }

    /// Diagonal configuration with the given phases.
    pub fn diagonal(theta: Vec<f64>) -> Self {
        let id: Vec<usize> = (0..theta.len()).collect();
        Self {
            perm_in: id.clone(),
            perm_out: id,
            theta,
        }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm_in == self.perm_out
    }

    /// Incident-to-reflecting element map: `bijection()[i]` is the element
    /// that re-radiates the signal arriving on element `i`.
    pub fn bijection(&self) -> Vec<usize> {
        let mut map = vec![0; self.n()];
        for (i, &src) in self.perm_in.iter().enumerate() {
            map[src] = self.perm_out[i];
        }
        map
    }

    /// The N×N matrix `Θ̃ = J_r diag(e^{jθ}) J_t`.
    pub fn expand(&self) -> CMat {
        let n = self.n();
        let mut m = CMat::from_element(n, n, ZERO);
        for i in 0..n {
            m[(self.perm_out[i], self.perm_in[i])] = Complex64::from_polar(1.0, self.theta[i]);
        }
        m
    }

    /// `J_t` as an explicit 0/1 matrix.
    pub fn j_t(&self) -> CMat {
        let n = self.n();
        let mut m = CMat::from_element(n, n, ZERO);
        for (i, &c) in self.perm_in.iter().enumerate() {
            m[(i, c)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// `J_r` as an explicit 0/1 matrix.
    pub fn j_r(&self) -> CMat {
        let n = self.n();
        let mut m = CMat::from_element(n, n, ZERO);
        for (i, &r) in self.perm_out.iter().enumerate() {
            m[(r, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// `h^H Θ̃ x` using the permutation structure (O(N)).
    pub fn reflect(&self, h_row: &[Complex64], x: &[Complex64]) -> Complex64 {
        self.perm_in
            .iter()
            .zip(&self.perm_out)
            .zip(&self.theta)
            .map(|((&src, &dst), &t)| h_row[dst] * Complex64::from_polar(1.0, t) * x[src])
            .sum()
    }

    /// Row vector `h^H Θ̃ G` (length M).
    pub fn effective_row(&self, h_row: &[Complex64], g: &CMat) -> CVec {
        let mut out = CVec::from_element(g.ncols(), ZERO);
        for i in 0..self.n() {
            let c = h_row[self.perm_out[i]] * Complex64::from_polar(1.0, self.theta[i]);
            let row = self.perm_in[i];
            for m in 0..g.ncols() {
                out[m] += c * g[(row, m)];
            }
        }
        out
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Transmit beamformer, power split and RIS configuration.
#[derive(Debug, Clone)]
pub struct BeamformingSolution {
    /// M×K, unit-norm columns.
    pub w: CMat,
    /// Power weights, non-negative and summing to one.
    pub lambda: Vec<f64>,
    pub phase: NonDiagonalPhase,
}

/// `|h^H Θ̃ g|²` computed through the expanded matrix.
pub fn channel_gain(h_row: &[Complex64], phase: &NonDiagonalPhase, g: &[Complex64]) -> Result<f64> {
    let n = phase.n();
    if h_row.len() != n || g.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "h has {} entries, g has {}, Θ is {n}×{n}",
            h_row.len(),
            g.len()
        )));
    }
    let theta = phase.expand();
    let gv = CVec::from_column_slice(g);
    let tg = theta * gv;
    let v: Complex64 = h_row.iter().zip(tg.iter()).map(|(a, b)| a * b).sum();
    Ok(v.norm_sqr())
}
