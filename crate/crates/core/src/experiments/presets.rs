//! Desk-scale reproductions of the published simulation figures.
//!
//! Common constants: `M = 4`, `d_t = 50 m`, `C0 = −30 dB`, `P_t = 50 mW`,
//! `σ_n² = −90 dBm`, `κ = −10 dB`, `α = 2.2`, `R_D = 30 m`, `K = 2`.
//! Trial counts per sweep point:
//!
//! | figure | trials | per-trial work |
//! |---|---|---|
//! | 5, 6, 8a, 8b | 10 000 | sort-and-pair SISO design |
//! | 9a–9c | 1 000 | alternating optimization |
//! | 10a–10f | 200 | SDP + water-filling per architecture |
//! | 7 | none | closed form |

use super::config::{Mode, Quantity, ScenarioConfig, Sweep, SweepVar};
use crate::channel::FadingParams;
use crate::error::{Error, Result};
use crate::phase::Architecture;

const KAPPA_DB: f64 = -10.0;

fn base(id: &str, figure: &str, mode: Mode) -> ScenarioConfig {
    let k = Quantity::db(KAPPA_DB).linear;
    ScenarioConfig {
        id: id.into(),
        figure: figure.into(),
        mode,
        m: 4,
        d_t: 50.0,
        d_r: vec![30.0],
        fading: FadingParams {
            kappa_g: k,
            kappa_h: vec![k],
            c0: 1e-3,
            alpha_t: 2.2,
            alpha_r: 2.2,
            ..FadingParams::default()
        },
        k: 1,
        pt: 0.05,
        sigma_n_sq: 1e-12,
        omega_th: Quantity::db(25.0).linear,
        architectures: vec![Architecture::Conventional, Architecture::NonDiagonal],
        trials: 10_000,
        seed: 1,
        ..ScenarioConfig::default()
    }
}

fn lin(v: &[f64]) -> Vec<Quantity> {
    v.iter().map(|&x| Quantity::linear(x)).collect()
}

fn db(v: &[f64]) -> Vec<Quantity> {
    v.iter().map(|&x| Quantity::db(x)).collect()
}

fn sweep(var: SweepVar, grid: Vec<Quantity>) -> Sweep {
    Sweep { var, grid }
}

fn rayleigh() -> FadingParams {
    FadingParams {
        kappa_g: 0.0,
        kappa_h: vec![0.0],
        ..FadingParams::default()
    }
}

const POW2_N: [f64; 7] = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0];
const MU_N: [f64; 4] = [8.0, 16.0, 32.0, 64.0];

fn mimo(id: &str, figure: &str) -> ScenarioConfig {
    ScenarioConfig {
        k: 2,
        r_d: Some(30.0),
        trials: 200,
        sweep: sweep(SweepVar::N, lin(&MU_N)),
        ..base(id, figure, Mode::Mimo)
    }
}

/// Known figure ids, in presentation order.
pub const FIGURE_IDS: [&str; 14] = [
    "5", "6", "7", "8a", "8b", "9a", "9b", "9c", "10a", "10b", "10c", "10d", "10e", "10f",
];

/// Scenario(s) reproducing one figure. Figures that compare a family of
/// curves return one scenario per family member, distinguished by id.
pub fn figure_presets(fig: &str) -> Result<Vec<ScenarioConfig>> {
    let f = format!("fig{fig}");
    let id = |suffix: &str| {
        if suffix.is_empty() {
            f.clone()
        } else {
            format!("{f}-{suffix}")
        }
    };
    let out = match fig {
        "5" => vec![ScenarioConfig {
            m: 1,
            fading: rayleigh(),
            architectures: vec![
                Architecture::Conventional,
                Architecture::NonDiagonal,
                Architecture::FullyConnected,
                Architecture::GroupConnected(2),
                Architecture::GroupConnected(4),
            ],
            sweep: sweep(SweepVar::N, lin(&POW2_N)),
            theory: true,
            ..base(&id(""), fig, Mode::Gain)
        }],
        "6" => vec![ScenarioConfig {
            m: 1,
            n_x: 16,
            n_y: 16,
            tie_kappa: true,
            sweep: sweep(SweepVar::KappaG, db(&[-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])),
            theory: true,
            ..base(&id(""), fig, Mode::Gain)
        }],
        "7" => vec![ScenarioConfig {
            architectures: vec![
                Architecture::Conventional,
                Architecture::NonDiagonal,
                Architecture::FullyConnected,
                Architecture::GroupConnected(2),
                Architecture::GroupConnected(4),
                Architecture::GroupConnected(8),
            ],
            sweep: sweep(SweepVar::N, lin(&[8.0, 16.0, 32.0, 64.0, 128.0, 256.0])),
            theory: true,
            ..base(&id(""), fig, Mode::Complexity)
        }],
        "8a" => vec![ScenarioConfig {
            m: 1,
            fading: FadingParams {
                c0: 1e-3,
                alpha_t: 2.2,
                alpha_r: 2.2,
                ..rayleigh()
            },
            // places ρ = (P_t/σ_n²) ϱ_t ϱ_r near 2 so the outage curve spans (0, 1)
            d_r: vec![2.0],
            architectures: vec![
                Architecture::Conventional,
                Architecture::NonDiagonal,
                Architecture::FullyConnected,
            ],
            sweep: sweep(SweepVar::N, lin(&[8.0, 16.0, 32.0, 64.0])),
            theory: true,
            ..base(&id(""), fig, Mode::Outage)
        }],
        "8b" => [4usize, 16, 64]
            .iter()
            .map(|&n| {
                let (nx, ny) = super::config::grid_shape(n);
                ScenarioConfig {
                    m: 1,
                    n_x: nx,
                    n_y: ny,
                    fading: rayleigh(),
                    architectures: vec![
                        Architecture::Conventional,
                        Architecture::NonDiagonal,
                        Architecture::FullyConnected,
                    ],
                    sweep: sweep(SweepVar::Rho, db(&rho_grid_db())),
                    theory: true,
                    ..base(&id(&format!("N{n}")), fig, Mode::Ber)
                }
            })
            .collect(),
        "9a" => vec![ScenarioConfig {
            trials: 1000,
            sweep: sweep(
                SweepVar::DR,
                lin(&[10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0]),
            ),
            ..base(&id(""), fig, Mode::Miso)
        }],
        "9b" => vec![ScenarioConfig {
            trials: 1000,
            sweep: sweep(SweepVar::N, lin(&[8.0, 16.0, 32.0, 64.0, 128.0])),
            ..base(&id(""), fig, Mode::Miso)
        }],
        "9c" => vec![ScenarioConfig {
            trials: 1000,
            w_init: crate::phase::WInit::FirstColumn,
            sweep: sweep(SweepVar::Iteration, lin(&(0..=10).map(f64::from).collect::<Vec<_>>())),
            ..base(&id(""), fig, Mode::Miso)
        }],
        "10a" => [20.0, 30.0, 40.0]
            .iter()
            .map(|&r| ScenarioConfig {
                r_d: Some(r),
                ..mimo(&id(&format!("RD{r}")), fig)
            })
            .collect(),
        "10b" => [1usize, 2, 4]
            .iter()
            .map(|&k| ScenarioConfig {
                k,
                ..mimo(&id(&format!("K{k}")), fig)
            })
            .collect(),
        "10c" => [2.2, 2.4, 2.6]
            .iter()
            .map(|&a| {
                let mut c = mimo(&id(&format!("alpha{a}")), fig);
                c.fading.alpha_t = a;
                c.fading.alpha_r = a;
                c
            })
            .collect(),
        "10d" => [0.0, 0.1, 0.2, 0.4]
            .iter()
            .map(|&s| {
                let mut c = mimo(&id(&format!("sigma{s}")), fig);
                c.fading.sigma_h_sq = s;
                c
            })
            .collect(),
        "10e" => [4.0, 0.25, 1.0 / 64.0]
            .iter()
            .map(|&d| {
                let mut c = mimo(&id(&format!("delta{d}")), fig);
                c.delta_0_over_lambda = d;
                c.fading.d_ref_over_lambda = 1.0;
                c
            })
            .collect(),
        "10f" => [-10.0, -3.0, 0.0, 10.0]
            .iter()
            .map(|&kg| {
                let mut c = mimo(&id(&format!("kappaG{kg}dB")), fig);
                c.fading.kappa_g = Quantity::db(kg).linear;
                c.fading.kappa_h = vec![Quantity::db(-20.0).linear];
                c
            })
            .collect(),
        other => return Err(Error::Config(format!("unknown figure id `{other}`"))),
    };
    for c in &out {
        c.validate()?;
    }
    Ok(out)
}

/// 20 points from −10 dB to 28 dB.
fn rho_grid_db() -> Vec<f64> {
    (0..20).map(|i| -10.0 + 2.0 * i as f64).collect()
}
