//! wasm-bindgen exports for `www/index.html`. Every export returns a JSON
//! string; errors surface as JS exceptions.

use num_complex::Complex64;
use risnd_core::experiments::{run_scenario, run_theory, Mode, Quantity, ScenarioConfig, Sweep, SweepVar};
use risnd_core::phase::{diag_phases_siso, nondiag_siso, Architecture};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize, PartialEq)]
pub struct Pairing {
    /// `Σ a_i b_i` with the diagonal RIS.
    pub diagonal_sum: f64,
    /// `Σ a_(i) b_(i)` after sorting both sides.
    pub sorted_sum: f64,
    /// 1-based: the signal arriving on element `i + 1` leaves from `map[i]`.
    pub map: Vec<usize>,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct Series {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Monte Carlo standard errors; empty for closed forms.
    pub stderr: Vec<f64>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Sort-and-pair design on real amplitudes `a` (BS-RIS) and `b` (RIS-user).
pub fn pairing(a: &[f64], b: &[f64]) -> Result<Pairing, String> {
    if a.len() != b.len() || a.is_empty() {
        return Err(format!(
            "need two amplitude lists of equal, non-zero length (got {} and {})",
            a.len(),
            b.len()
        ));
    }
    if a.iter().chain(b).any(|&x| x < 0.0 || !x.is_finite()) {
        return Err("amplitudes must be finite and non-negative".into());
    }
    let g: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let h: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let nd = nondiag_siso(&g, &h);
    Ok(Pairing {
        diagonal_sum: diag_phases_siso(&g, &h).reflect(&h, &g).norm(),
        sorted_sum: nd.reflect(&h, &g).norm(),
        map: nd.bijection().iter().map(|&j| j + 1).collect(),
    })
}

/// Groups rows by architecture; Monte Carlo series are named `mc:<arch>`.
fn collect(rows: &[risnd_core::experiments::MetricRecord]) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for r in rows {
        let name = if r.trials > 0 {
            format!("mc:{}", r.architecture)
        } else {
            r.architecture.clone()
        };
        let s = match out.iter_mut().find(|s| s.name == name) {
            Some(s) => s,
            None => {
                out.push(Series {
                    name,
                    x: vec![],
                    y: vec![],
                    stderr: vec![],
                });
                out.last_mut().unwrap()
            }
        };
        s.x.push(r.sweep_value);
        s.y.push(r.mean);
        if r.trials > 0 {
            s.stderr.push(r.stderr);
        }
    }
    out
}

fn n_sweep(ns: &[u32]) -> Sweep {
    Sweep {
        var: SweepVar::N,
        grid: ns.iter().map(|&n| Quantity::linear(n as f64)).collect(),
    }
}

/// Normalized SISO gain versus N for a linear Rician factor `kappa` on both
/// links. `trials = 0` gives closed forms only.
pub fn gains(ns: &[u32], kappa: f64, trials: usize, seed: u64) -> Result<Vec<Series>, String> {
    let mut cfg = ScenarioConfig {
        id: "demo-gain".into(),
        mode: Mode::Gain,
        m: 1,
        architectures: vec![
            Architecture::Conventional,
            Architecture::NonDiagonal,
            Architecture::FullyConnected,
        ],
        trials: trials.max(1),
        seed,
        sweep: n_sweep(ns),
        theory: true,
        ..ScenarioConfig::default()
    };
    cfg.fading.kappa_g = kappa;
    cfg.fading.kappa_h = vec![kappa];
    if trials == 0 {
        return Ok(collect(&run_theory(&cfg).map_err(err)?));
    }
    Ok(collect(&run_scenario(&cfg).map_err(err)?))
}

/// Closed-form outage probability versus N, or average BPSK BER versus ρ
/// for a fixed N, in Rayleigh fading.
pub fn error_curves(kind: &str, ns: &[u32], rho_db: &[f64], omega_th_db: f64) -> Result<Vec<Series>, String> {
    let (mode, sweep) = match kind {
        "outage" => (Mode::Outage, n_sweep(ns)),
        "ber" => (
            Mode::Ber,
            Sweep {
                var: SweepVar::Rho,
                grid: rho_db.iter().map(|&r| Quantity::db(r)).collect(),
            },
        ),
        other => return Err(format!("unknown curve `{other}` (expected outage or ber)")),
    };
    let mut cfg = ScenarioConfig {
        id: format!("demo-{kind}"),
        mode,
        m: 1,
        omega_th: Quantity::db(omega_th_db).linear,
        sweep,
        theory: true,
        ..ScenarioConfig::default()
    };
    cfg.fading.kappa_g = 0.0;
    cfg.fading.kappa_h = vec![0.0];
    if mode == Mode::Ber {
        let n = *ns.first().ok_or("BER needs one N")? as usize;
        (cfg.n_x, cfg.n_y) = risnd_core::experiments::grid_shape(n);
    } else {
        cfg.rho = Some(Quantity::db(*rho_db.first().ok_or("outage needs one ρ")?).linear);
    }
    Ok(collect(&run_theory(&cfg).map_err(err)?))
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn siso_pairing(a: Vec<f64>, b: Vec<f64>) -> Result<String, JsError> {
    to_js(pairing(&a, &b))
}

#[wasm_bindgen]
pub fn gain_curves(ns: Vec<u32>, kappa: f64, trials: usize, seed: u64) -> Result<String, JsError> {
    to_js(gains(&ns, kappa, trials, seed))
}

#[wasm_bindgen]
pub fn performance_curves(kind: &str, ns: Vec<u32>, rho_db: Vec<f64>, omega_th_db: f64) -> Result<String, JsError> {
    to_js(error_curves(kind, &ns, &rho_db, omega_th_db))
}
