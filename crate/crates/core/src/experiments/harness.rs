use super::config::{Mode, ScenarioConfig, SweepVar};
use super::rate::{achievable_rate, RateMode};
use crate::channel::{corrupt_csi, path_loss, sample_channels, ChannelRealization, CorrelationFactor, Geometry};
use crate::error::Result;
use crate::linalg::CMat;
use crate::phase::{
    alt_opt_miso, baseline_gains, diag_phases_siso, nondiag_siso, two_stage_mimo, AltOptOptions, Architecture,
    BeamformingSolution,
};
use crate::theory;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// One aggregated output row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRecord {
    pub scenario_id: String,
    pub figure: String,
    pub sweep_name: String,
    pub sweep_value: f64,
    pub architecture: String,
    pub metric: String,
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
    pub failures: usize,
    pub seed: u64,
}

/// Per-trial rng: the scenario seed on stream `(point << 32) | trial`.
pub fn trial_rng(seed: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng
}

#[derive(Debug, Clone)]
struct Slot {
    arch: usize,
    metric: &'static str,
}

fn slots(cfg: &ScenarioConfig) -> Vec<Slot> {
    let metrics: &[&'static str] = match cfg.mode {
        Mode::Gain => &["gain"],
        Mode::Outage => &["outage"],
        Mode::Ber => &["ber"],
        Mode::Miso if cfg.sweep.var == SweepVar::Iteration => &["rate"],
        Mode::Miso => &["rate", "iterations"],
        Mode::Mimo => &["rate", "sdp_gap", "iterations"],
        Mode::Complexity => &[],
    };
    (0..cfg.architectures.len())
        .flat_map(|a| metrics.iter().map(move |&m| Slot { arch: a, metric: m }))
        .collect()
}

/// Everything that is fixed within one sweep point.
struct PointCtx {
    cfg: ScenarioConfig,
    geom: Geometry,
    corr: Option<CorrelationFactor>,
    /// Sweep value when the sweep is over iterations.
    iteration: Option<usize>,
}

impl PointCtx {
    fn new(base: &ScenarioConfig, value: f64) -> Result<Self> {
        let cfg = base.at_point(value);
        let geom = cfg.geometry(cfg.resolved_angles());
        geom.validate()?;
        let corr = CorrelationFactor::new(&geom, &cfg.fading)?;
        let iteration = (cfg.sweep.var == SweepVar::Iteration).then_some(value as usize);
        Ok(Self {
            cfg,
            geom,
            corr,
            iteration,
        })
    }

    /// Draws the true channel and the estimate the designs see.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(ChannelRealization, ChannelRealization)> {
        let cfg = &self.cfg;
        let mut geom = self.geom.clone();
        if let Some(r_d) = cfg.r_d {
            // uniform over the half-disc: radius √U·R_D (clipped to the 1 m
            // reference distance), azimuth uniform on [0, π)
            let mut d = Vec::with_capacity(cfg.k);
            let mut az = Vec::with_capacity(cfg.k);
            for _ in 0..cfg.k {
                d.push((r_d * rng.random::<f64>().sqrt()).max(1.0));
                az.push(PI * rng.random::<f64>());
            }
            geom.d_r = d;
            let el = geom.angles.phi_d.clone();
            geom.angles.phi_d = (0..cfg.k).map(|k| if el.len() == 1 { el[0] } else { el[k] }).collect();
            geom.angles.varphi_d = az;
        }
        let mut real = sample_channels(&geom, &cfg.fading, cfg.k, rng)?;
        if let Some(c) = &self.corr {
            real = c.apply(&real);
        }
        let est = corrupt_csi(&real, cfg.fading.sigma_h_sq, rng)?;
        Ok((real, est))
    }

    fn snr(&self) -> f64 {
        self.cfg.pt / self.cfg.sigma_n_sq
    }

    /// SISO SNR for a raw gain `|h^H Θ̃ g|²`.
    fn siso_snr(&self, real: &ChannelRealization, gain: f64) -> f64 {
        match self.cfg.rho {
            Some(rho) => rho * gain / (real.rho_t * real.rho_r[0]),
            None => self.snr() * gain,
        }
    }
}

fn col(m: &CMat, j: usize) -> Vec<Complex64> {
    m.column(j).iter().copied().collect()
}

fn row(m: &CMat, i: usize) -> Vec<Complex64> {
    m.row(i).iter().copied().collect()
}

/// Raw SISO gain of `arch`, designed on `est` and evaluated on `real`.
fn siso_gain(arch: Architecture, real: &ChannelRealization, est: &ChannelRealization) -> Result<f64> {
    let (g, h) = (col(&real.g, 0), row(&real.h, 0));
    let (ge, he) = (col(&est.g, 0), row(&est.h, 0));
    let phase = match arch {
        Architecture::Conventional => diag_phases_siso(&ge, &he),
        Architecture::NonDiagonal => nondiag_siso(&ge, &he),
        Architecture::FullyConnected => return Ok(baseline_gains(&g, &h, g.len())?.fully_connected),
        Architecture::GroupConnected(s) => return Ok(baseline_gains(&g, &h, s)?.group_connected),
    };
    Ok(phase.reflect(&h, &g).norm_sqr())
}

fn run_trial(ctx: &PointCtx, slots: &[Slot], rng: &mut ChaCha8Rng) -> Vec<Option<f64>> {
    let cfg = &ctx.cfg;
    let mut out = vec![None; slots.len()];
    let (real, est) = match ctx.draw(rng) {
        Ok(x) => x,
        Err(_) => return out,
    };
    for (a, &arch) in cfg.architectures.iter().enumerate() {
        let values: Result<Vec<(&'static str, f64)>> = (|| {
            Ok(match cfg.mode {
                Mode::Gain => {
                    let g = siso_gain(arch, &real, &est)?;
                    let n = real.n() as f64;
                    vec![("gain", g / (real.rho_t * real.rho_r[0] * n * n))]
                }
                Mode::Outage => {
                    let snr = ctx.siso_snr(&real, siso_gain(arch, &real, &est)?);
                    vec![("outage", if snr <= cfg.omega_th { 1.0 } else { 0.0 })]
                }
                Mode::Ber => {
                    let snr = ctx.siso_snr(&real, siso_gain(arch, &real, &est)?);
                    vec![("ber", theory::conditional_ber(snr, cfg.ber_p, cfg.ber_q))]
                }
                Mode::Miso => {
                    let opts = AltOptOptions {
                        eps: cfg.eps,
                        max_iter: cfg.max_iter,
                        init: cfg.w_init,
                        architecture: arch,
                    };
                    let res = alt_opt_miso(&est.g, &row(&est.h, 0), &opts, rng)?;
                    if let Some(j) = ctx.iteration {
                        let obj = res.trace[j.min(res.trace.len() - 1)];
                        vec![("rate", (1.0 + ctx.snr() * obj).log2())]
                    } else {
                        let sol = BeamformingSolution {
                            w: CMat::from_column_slice(res.w.len(), 1, res.w.as_slice()),
                            lambda: vec![1.0],
                            phase: res.phase,
                        };
                        let r = achievable_rate(&real, &sol, cfg.pt, cfg.sigma_n_sq, RateMode::Miso)?;
                        vec![("rate", r), ("iterations", res.iterations as f64)]
                    }
                }
                Mode::Mimo => {
                    let d = two_stage_mimo(&est.g, &est.h, cfg.pt, cfg.sigma_n_sq, arch)?;
                    let r = achievable_rate(&real, &d.solution, cfg.pt, cfg.sigma_n_sq, RateMode::Mimo)?;
                    vec![
                        ("rate", r),
                        ("sdp_gap", d.sdp_gap),
                        ("iterations", d.sdp_iterations as f64),
                    ]
                }
                Mode::Complexity => Vec::new(),
            })
        })();
        if let Ok(vals) = values {
            for (i, s) in slots.iter().enumerate() {
                if s.arch == a {
                    out[i] = vals.iter().find(|(m, _)| *m == s.metric).map(|(_, v)| *v);
                }
            }
        }
    }
    out
}

#[cfg(feature = "parallel")]
fn map_trials(trials: usize, f: impl Fn(usize) -> Vec<Option<f64>> + Sync + Send) -> Vec<Vec<Option<f64>>> {
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_trials(trials: usize, f: impl Fn(usize) -> Vec<Option<f64>>) -> Vec<Vec<Option<f64>>> {
    (0..trials).map(f).collect()
}

/// Sample mean and standard error. Proportions use the Agresti–Coull
/// interval so an all-zero sample still reports a non-zero spread.
fn aggregate(values: &[f64], proportion: bool) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if proportion {
        let x = values.iter().sum::<f64>();
        let nt = n + 4.0;
        let pt = (x + 2.0) / nt;
        return (mean, (pt * (1.0 - pt) / nt).sqrt());
    }
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Raw per-trial values at one sweep point.
#[derive(Debug, Clone)]
pub struct PointSamples {
    pub sweep_value: f64,
    /// `(architecture, metric)` per column of `rows`.
    pub columns: Vec<(String, &'static str)>,
    /// One row per trial; `None` marks a failed design.
    pub rows: Vec<Vec<Option<f64>>>,
}

impl PointSamples {
    fn column(&self, arch: &str, metric: &str) -> Option<usize> {
        self.columns.iter().position(|(a, m)| a == arch && *m == metric)
    }

    /// Mean, standard error and count of `a − b` over trials where both succeeded.
    pub fn paired_difference(&self, a: &str, b: &str, metric: &str) -> Option<(f64, f64, usize)> {
        let (ia, ib) = (self.column(a, metric)?, self.column(b, metric)?);
        let d: Vec<f64> = self.rows.iter().filter_map(|r| Some(r[ia]? - r[ib]?)).collect();
        let (mean, se) = aggregate(&d, false);
        Some((mean, se, d.len()))
    }
}

/// Per-trial values for every sweep point, with paired channel draws
/// across architectures. Output is independent of thread count.
pub fn run_samples(cfg: &ScenarioConfig) -> Result<Vec<PointSamples>> {
    cfg.validate()?;
    let slots = slots(cfg);
    let columns: Vec<(String, &'static str)> = slots
        .iter()
        .map(|s| (cfg.architectures[s.arch].to_string(), s.metric))
        .collect();
    let mut out = Vec::new();
    for (p, q) in cfg.sweep.grid.iter().enumerate() {
        let ctx = PointCtx::new(cfg, q.linear)?;
        // iteration points share draws so the curve follows the same trials
        let stream_point = if ctx.iteration.is_some() { 0 } else { p };
        let rows = map_trials(cfg.trials, |t| {
            let mut rng = trial_rng(cfg.seed, stream_point, t);
            run_trial(&ctx, &slots, &mut rng)
        });
        out.push(PointSamples {
            sweep_value: q.written,
            columns: columns.clone(),
            rows,
        });
    }
    Ok(out)
}

/// Runs every sweep point and architecture with paired channel draws.
///
/// Per-trial design failures are counted in `failures` and left out of the
/// mean.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<MetricRecord>> {
    let label = cfg.sweep.label();
    let mut records = Vec::new();
    for (pt, q) in run_samples(cfg)?.into_iter().zip(&cfg.sweep.grid) {
        for (i, (arch, metric)) in pt.columns.iter().enumerate() {
            let ok: Vec<f64> = pt.rows.iter().filter_map(|r| r[i]).collect();
            let (mean, stderr) = aggregate(&ok, *metric == "outage");
            records.push(MetricRecord {
                scenario_id: cfg.id.clone(),
                figure: cfg.figure.clone(),
                sweep_name: label.clone(),
                sweep_value: q.written,
                architecture: arch.clone(),
                metric: metric.to_string(),
                mean,
                stderr,
                trials: cfg.trials,
                failures: cfg.trials - ok.len(),
                seed: cfg.seed,
            });
        }
        if cfg.theory {
            records.extend(theory_rows(&cfg.at_point(q.linear), &label, q.written)?);
        }
    }
    Ok(records)
}

/// Closed-form rows only, for every sweep point.
pub fn run_theory(cfg: &ScenarioConfig) -> Result<Vec<MetricRecord>> {
    cfg.validate()?;
    let label = cfg.sweep.label();
    let mut records = Vec::new();
    for q in &cfg.sweep.grid {
        records.extend(theory_rows(&cfg.at_point(q.linear), &label, q.written)?);
    }
    Ok(records)
}

/// `ρ = (P_t/σ_n²) ϱ_t ϱ_r` unless overridden.
pub fn reference_snr(cfg: &ScenarioConfig) -> f64 {
    cfg.rho.unwrap_or_else(|| {
        let rt = path_loss(cfg.fading.c0, cfg.d_t, cfg.fading.alpha_t);
        let rr = path_loss(cfg.fading.c0, cfg.d_r[0], cfg.fading.alpha_r);
        cfg.pt / cfg.sigma_n_sq * rt * rr
    })
}

fn theory_rows(cfg: &ScenarioConfig, label: &str, written: f64) -> Result<Vec<MetricRecord>> {
    let n = cfg.n();
    let (kg, kh) = (cfg.fading.kappa_g, cfg.fading.kappa_h[0]);
    let rayleigh = kg == 0.0 && kh == 0.0;
    let mut rows: Vec<(String, &'static str, f64)> = Vec::new();
    match cfg.mode {
        Mode::Gain => {
            let n2 = (n * n) as f64;
            for &a in &cfg.architectures {
                let v = match a {
                    Architecture::Conventional => Some(theory::diag_gain_rician(n, kg, kh)?),
                    Architecture::NonDiagonal if rayleigh => Some(theory::nondiag_gain_rayleigh(n)?),
                    Architecture::NonDiagonal => Some(theory::nondiag_gain_rician(n, kg, kh)?),
                    Architecture::FullyConnected => Some(n2),
                    Architecture::GroupConnected(s) if rayleigh && n.is_multiple_of(s) => {
                        Some(theory::group_gain_rayleigh(n, s)?)
                    }
                    Architecture::GroupConnected(_) => None,
                };
                if let Some(v) = v {
                    rows.push((format!("theory:{a}"), "gain", v / n2));
                }
            }
            let asym = theory::asymptotic_gains(n, kg, kh)?;
            let n2 = (n * n) as f64;
            rows.push(("asymptote:conventional".into(), "gain", asym.diag / n2));
            rows.push(("asymptote:nondiag".into(), "gain", asym.nondiag / n2));
        }
        Mode::Outage => {
            let m = theory::SnrModel::new(reference_snr(cfg), n)?;
            rows.push((
                "theory:nondiag".into(),
                "outage",
                theory::outage_probability(cfg.omega_th, m)?,
            ));
        }
        Mode::Ber => {
            let rho = reference_snr(cfg);
            let m = theory::SnrModel::new(rho, n)?;
            rows.push((
                "theory:nondiag".into(),
                "ber",
                theory::average_ber(m, cfg.ber_p, cfg.ber_q)?,
            ));
            let los = rho * (n * n) as f64;
            rows.push((
                "theory:los".into(),
                "ber",
                theory::conditional_ber(los, cfg.ber_p, cfg.ber_q),
            ));
        }
        Mode::Complexity => {
            for &a in &cfg.architectures {
                let group = match a {
                    Architecture::GroupConnected(s) => s as u64,
                    _ => 1,
                };
                let c = theory::complexity_counts(n as u64, group)?;
                let pick = |x: &theory::ArchitectureCounts| match a {
                    Architecture::Conventional => x.conventional,
                    Architecture::NonDiagonal => x.proposed,
                    Architecture::FullyConnected => x.full,
                    Architecture::GroupConnected(_) => x.group,
                };
                rows.push((format!("theory:{a}"), "impedances", pick(&c.impedances) as f64));
                rows.push((format!("theory:{a}"), "control_load", pick(&c.control_load) as f64));
            }
        }
        Mode::Miso | Mode::Mimo => {}
    }
    Ok(rows
        .into_iter()
        .map(|(architecture, metric, mean)| MetricRecord {
            scenario_id: cfg.id.clone(),
            figure: cfg.figure.clone(),
            sweep_name: label.to_string(),
            sweep_value: written,
            architecture,
            metric: metric.to_string(),
            mean,
            stderr: 0.0,
            trials: 0,
            failures: 0,
            seed: cfg.seed,
        })
        .collect())
}
