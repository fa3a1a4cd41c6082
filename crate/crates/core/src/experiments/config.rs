//! Scenario configuration and its TOML form.
//!
//! A config file has three sections, `[geometry]`, `[fading]` and `[run]`.
//! Unknown keys are rejected. Scalars that carry a physical scale can be
//! written as plain numbers (linear) or as strings with a unit suffix:
//! `"-30 dB"`, `"-90 dBm"`, `"50 mW"`, `"0.05 W"`.

use crate::channel::{Angles, FadingParams, Geometry};
use crate::error::{Error, Result};
use crate::phase::{Architecture, WInit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A number parsed from the config together with the unit it was written in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    /// Linear value (watts for powers).
    pub linear: f64,
    /// The number as written.
    pub written: f64,
    pub unit: Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Linear,
    #[serde(rename = "dB")]
    Db,
    #[serde(rename = "dBm")]
    Dbm,
    #[serde(rename = "mW")]
    MilliWatt,
    #[serde(rename = "W")]
    Watt,
}

impl Unit {
    fn suffix(self) -> &'static str {
        match self {
            Unit::Linear => "",
            Unit::Db => "dB",
            Unit::Dbm => "dBm",
            Unit::MilliWatt => "mW",
            Unit::Watt => "W",
        }
    }
}

impl Quantity {
    pub fn linear(v: f64) -> Self {
        Self {
            linear: v,
            written: v,
            unit: Unit::Linear,
        }
    }

    pub fn db(v: f64) -> Self {
        Self {
            linear: 10f64.powf(v / 10.0),
            written: v,
            unit: Unit::Db,
        }
    }

    pub fn dbm(v: f64) -> Self {
        Self {
            linear: 10f64.powf(v / 10.0) * 1e-3,
            written: v,
            unit: Unit::Dbm,
        }
    }

    pub fn milliwatt(v: f64) -> Self {
        Self {
            linear: v * 1e-3,
            written: v,
            unit: Unit::MilliWatt,
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        // longest suffix first so "dBm" is not read as "dB"
        let units = [
            ("dBm", Unit::Dbm),
            ("dB", Unit::Db),
            ("mW", Unit::MilliWatt),
            ("W", Unit::Watt),
        ];
        let (num, unit) = units
            .iter()
            .find_map(|(suf, u)| t.strip_suffix(suf).map(|n| (n, *u)))
            .unwrap_or((t, Unit::Linear));
        let v: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse quantity `{s}`")))?;
        Ok(match unit {
            Unit::Linear => Quantity::linear(v),
            Unit::Db => Quantity::db(v),
            Unit::Dbm => Quantity::dbm(v),
            Unit::MilliWatt => Quantity::milliwatt(v),
            Unit::Watt => Quantity {
                linear: v,
                written: v,
                unit: Unit::Watt,
            },
        })
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Quantity::linear(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// What is simulated per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// SISO channel gain normalized by `ϱ_t ϱ_r N²`.
    Gain,
    /// SISO outage indicator `SNR ≤ ω_th`.
    Outage,
    /// SISO conditional error probability averaged over the fading.
    Ber,
    /// Single-user MISO alternating optimization rate.
    Miso,
    /// Multi-user MIMO two-stage design rate.
    Mimo,
    /// Closed-form complexity counts only; no Monte Carlo.
    Complexity,
}

/// The single swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVar {
    N,
    #[serde(rename = "d_r")]
    DR,
    #[serde(rename = "R_D")]
    RD,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "sigma_h_sq")]
    SigmaHSq,
    #[serde(rename = "delta_0")]
    Delta0,
    #[serde(rename = "kappa_G")]
    KappaG,
    #[serde(rename = "rho")]
    Rho,
    #[serde(rename = "omega_th")]
    OmegaTh,
    /// Alternating-optimization iteration index (MISO only).
    #[serde(rename = "iteration")]
    Iteration,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::N => "N",
            SweepVar::DR => "d_r",
            SweepVar::RD => "R_D",
            SweepVar::Alpha => "alpha",
            SweepVar::SigmaHSq => "sigma_h_sq",
            SweepVar::Delta0 => "delta_0",
            SweepVar::KappaG => "kappa_G",
            SweepVar::Rho => "rho",
            SweepVar::OmegaTh => "omega_th",
            SweepVar::Iteration => "iteration",
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub var: SweepVar,
    pub grid: Vec<Quantity>,
}

impl Sweep {
    /// Column label: the variable name, plus the unit when the grid was
    /// written in one (e.g. `rho[dB]`).
    pub fn label(&self) -> String {
        match self.grid.first().map(|q| q.unit) {
            Some(u) if u != Unit::Linear => format!("{}[{}]", self.var, u.suffix()),
            _ => self.var.name().to_string(),
        }
    }
}

/// Fully resolved scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub id: String,
    pub figure: String,
    pub mode: Mode,
    pub m: usize,
    pub n_x: usize,
    pub n_y: usize,
    pub delta_a_over_lambda: f64,
    pub delta_0_over_lambda: f64,
    pub d_t: f64,
    pub d_r: Vec<f64>,
    /// Radius of the half-disc users are dropped in; `None` keeps `d_r`.
    pub r_d: Option<f64>,
    /// Fixed LoS angles; `None` draws them once per scenario from the seed.
    pub angles: Option<Angles>,
    pub fading: FadingParams,
    /// Sweeping `kappa_G` also sets every `kappa_h` to the same value.
    pub tie_kappa: bool,
    pub k: usize,
    pub pt: f64,
    pub sigma_n_sq: f64,
    /// Overrides `(P_t/σ_n²) ϱ_t ϱ_r` as the SISO reference SNR when set.
    pub rho: Option<f64>,
    pub omega_th: f64,
    pub ber_p: f64,
    pub ber_q: f64,
    pub architectures: Vec<Architecture>,
    pub trials: usize,
    pub seed: u64,
    pub sweep: Sweep,
    /// Emit closed-form rows next to the Monte Carlo rows.
    pub theory: bool,
    pub eps: f64,
    pub max_iter: usize,
    #[serde(serialize_with = "ser_display")]
    pub w_init: WInit,
}

fn ser_display<S: serde::Serializer>(w: &WInit, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(match w {
        WInit::MeanColumn => "mean-column",
        WInit::FirstColumn => "first-column",
        WInit::Random => "random",
    })
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            id: "scenario".into(),
            figure: String::new(),
            mode: Mode::Gain,
            m: 4,
            n_x: 8,
            n_y: 8,
            delta_a_over_lambda: 0.5,
            delta_0_over_lambda: 0.5,
            d_t: 50.0,
            d_r: vec![30.0],
            r_d: None,
            angles: None,
            fading: FadingParams {
                kappa_g: 0.1,
                kappa_h: vec![0.1],
                ..FadingParams::default()
            },
            tie_kappa: false,
            k: 1,
            pt: 0.05,
            sigma_n_sq: 1e-12,
            rho: None,
            omega_th: 10f64.powf(2.5),
            ber_p: 0.5,
            ber_q: 1.0,
            architectures: vec![Architecture::Conventional, Architecture::NonDiagonal],
            trials: 10_000,
            seed: 1,
            sweep: Sweep {
                var: SweepVar::N,
                grid: vec![Quantity::linear(64.0)],
            },
            theory: false,
            eps: 1e-4,
            max_iter: 50,
            w_init: WInit::MeanColumn,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sweep.grid.is_empty() {
            return bad("sweep grid must be non-empty".into());
        }
        if self.architectures.is_empty() && self.mode != Mode::Complexity {
            return bad("at least one architecture is required".into());
        }
        if self.k == 0 {
            return bad("K must be at least 1".into());
        }
        if matches!(self.mode, Mode::Gain | Mode::Outage | Mode::Ber | Mode::Miso) && self.k != 1 {
            return bad(format!("mode {:?} is single-user, got K = {}", self.mode, self.k));
        }
        if self.mode == Mode::Mimo && self.k > self.m {
            return bad(format!("MIMO needs K ≤ M, got K = {}, M = {}", self.k, self.m));
        }
        if matches!(self.mode, Mode::Mimo | Mode::Miso) {
            for a in &self.architectures {
                if !matches!(a, Architecture::Conventional | Architecture::NonDiagonal) {
                    return bad(format!("architecture {a} has no {:?} design", self.mode));
                }
            }
        }
        if self.sweep.var == SweepVar::Iteration && self.mode != Mode::Miso {
            return bad("the iteration sweep is only defined for mode = \"miso\"".into());
        }
        if !(self.pt > 0.0) || !(self.sigma_n_sq > 0.0) {
            return bad("Pt and sigma_n_sq must be positive".into());
        }
        if let Some(r) = self.r_d {
            if !(r > 0.0) {
                return bad("R_D must be positive".into());
            }
        }
        if !(self.eps > 0.0) || self.max_iter == 0 {
            return bad("eps must be positive and max_iter at least 1".into());
        }
        if self.rho.is_some_and(|r| !(r > 0.0)) {
            return bad("rho must be positive".into());
        }
        if !(self.ber_p > 0.0 && self.ber_q > 0.0) {
            return bad("ber_p and ber_q must be positive".into());
        }
        for q in &self.sweep.grid {
            self.check_point(q.linear)?;
        }
        self.fading.validate()?;
        Ok(())
    }

    fn check_point(&self, v: f64) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        match self.sweep.var {
            SweepVar::N | SweepVar::Iteration => {
                if v < 0.0 || v.fract() != 0.0 || (self.sweep.var == SweepVar::N && v < 1.0) {
                    return bad(format!("{} grid values must be whole numbers, got {v}", self.sweep.var));
                }
            }
            SweepVar::SigmaHSq | SweepVar::KappaG => {
                if !(v >= 0.0) {
                    return bad(format!("{} grid values must be ≥ 0, got {v}", self.sweep.var));
                }
            }
            _ => {
                if !(v > 0.0) {
                    return bad(format!("{} grid values must be positive, got {v}", self.sweep.var));
                }
            }
        }
        Ok(())
    }

    /// LoS angles in effect: the configured ones or a draw from a stream
    /// reserved for them, so they depend on the seed alone.
    pub fn resolved_angles(&self) -> Angles {
        if let Some(a) = &self.angles {
            return a.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::MAX);
        Angles::random(&mut rng, self.k)
    }

    /// Copy of the config with the sweep variable set to `value` (linear).
    pub fn at_point(&self, value: f64) -> ScenarioConfig {
        let mut c = self.clone();
        match self.sweep.var {
            SweepVar::N => {
                let (nx, ny) = grid_shape(value as usize);
                c.n_x = nx;
                c.n_y = ny;
            }
            SweepVar::DR => c.d_r = vec![value],
            SweepVar::RD => c.r_d = Some(value),
            SweepVar::Alpha => {
                c.fading.alpha_t = value;
                c.fading.alpha_r = value;
            }
            SweepVar::SigmaHSq => c.fading.sigma_h_sq = value,
            SweepVar::Delta0 => c.delta_0_over_lambda = value,
            SweepVar::KappaG => {
                c.fading.kappa_g = value;
                if self.tie_kappa {
                    c.fading.kappa_h = vec![value];
                }
            }
            SweepVar::Rho => c.rho = Some(value),
            SweepVar::OmegaTh => c.omega_th = value,
            SweepVar::Iteration => {}
        }
        c
    }

    pub fn n(&self) -> usize {
        self.n_x * self.n_y
    }

    pub fn geometry(&self, angles: Angles) -> Geometry {
        Geometry {
            m: self.m,
            n_x: self.n_x,
            n_y: self.n_y,
            delta_a_over_lambda: self.delta_a_over_lambda,
            delta_0_over_lambda: self.delta_0_over_lambda,
            d_t: self.d_t,
            d_r: self.d_r.clone(),
            angles,
        }
    }

    /// Parses a TOML document.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = file.into_config()?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Grid `(n_x, n_y)` for `N` elements: as square as possible, `n_y ≤ n_x`.
pub fn grid_shape(n: usize) -> (usize, usize) {
    let mut ny = (n as f64).sqrt().floor() as usize;
    while ny > 1 && !n.is_multiple_of(ny) {
        ny -= 1;
    }
    let ny = ny.max(1);
    (n / ny, ny)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    geometry: GeometrySection,
    #[serde(default)]
    fading: FadingSection,
    run: RunSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometrySection {
    #[serde(rename = "M")]
    m: Option<usize>,
    #[serde(rename = "N_x")]
    n_x: Option<usize>,
    #[serde(rename = "N_y")]
    n_y: Option<usize>,
    delta_a_over_lambda: Option<f64>,
    delta_0_over_lambda: Option<f64>,
    d_t: Option<f64>,
    d_r: Option<Vec<f64>>,
    #[serde(rename = "R_D")]
    r_d: Option<f64>,
    angles: Option<AnglesSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnglesSection {
    #[serde(rename = "psi_D")]
    psi_d: f64,
    #[serde(rename = "phi_A")]
    phi_a: f64,
    #[serde(rename = "varphi_A")]
    varphi_a: f64,
    #[serde(rename = "phi_D")]
    phi_d: Vec<f64>,
    #[serde(rename = "varphi_D")]
    varphi_d: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FadingSection {
    kappa_g: Option<Quantity>,
    kappa_h: Option<Vec<Quantity>>,
    #[serde(rename = "C0")]
    c0: Option<Quantity>,
    alpha_t: Option<f64>,
    alpha_r: Option<f64>,
    sigma_h_sq: Option<f64>,
    d_ref_over_lambda: Option<f64>,
    corr_base: Option<f64>,
    tie_kappa: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    id: Option<String>,
    figure: Option<String>,
    mode: Mode,
    #[serde(rename = "K")]
    k: Option<usize>,
    #[serde(rename = "Pt")]
    pt: Option<Quantity>,
    sigma_n_sq: Option<Quantity>,
    rho: Option<Quantity>,
    omega_th: Option<Quantity>,
    ber_p: Option<f64>,
    ber_q: Option<f64>,
    architectures: Option<Vec<String>>,
    trials: Option<usize>,
    seed: Option<u64>,
    sweep: SweepVar,
    grid: Vec<Quantity>,
    theory: Option<bool>,
    eps: Option<f64>,
    max_iter: Option<usize>,
    w_init: Option<String>,
}

impl ConfigFile {
    fn into_config(self) -> Result<ScenarioConfig> {
        let d = ScenarioConfig::default();
        let (g, f, r) = (self.geometry, self.fading, self.run);
        let architectures = match r.architectures {
            Some(v) => v.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?,
            None => d.architectures.clone(),
        };
        let angles = g.angles.map(|a| Angles {
            psi_d: a.psi_d,
            phi_a: a.phi_a,
            varphi_a: a.varphi_a,
            phi_d: a.phi_d,
            varphi_d: a.varphi_d,
        });
        let w_init = match r.w_init {
            Some(s) => s.parse()?,
            None => d.w_init,
        };
        let df = &d.fading;
        Ok(ScenarioConfig {
            id: r.id.unwrap_or(d.id),
            figure: r.figure.unwrap_or_default(),
            mode: r.mode,
            m: g.m.unwrap_or(d.m),
            n_x: g.n_x.unwrap_or(d.n_x),
            n_y: g.n_y.unwrap_or(d.n_y),
            delta_a_over_lambda: g.delta_a_over_lambda.unwrap_or(d.delta_a_over_lambda),
            delta_0_over_lambda: g.delta_0_over_lambda.unwrap_or(d.delta_0_over_lambda),
            d_t: g.d_t.unwrap_or(d.d_t),
            d_r: g.d_r.unwrap_or(d.d_r),
            r_d: g.r_d,
            angles,
            fading: FadingParams {
                kappa_g: f.kappa_g.map_or(df.kappa_g, |q| q.linear),
                kappa_h: f
                    .kappa_h
                    .map_or(df.kappa_h.clone(), |v| v.iter().map(|q| q.linear).collect()),
                c0: f.c0.map_or(df.c0, |q| q.linear),
                alpha_t: f.alpha_t.unwrap_or(df.alpha_t),
                alpha_r: f.alpha_r.unwrap_or(df.alpha_r),
                sigma_h_sq: f.sigma_h_sq.unwrap_or(df.sigma_h_sq),
                d_ref_over_lambda: f.d_ref_over_lambda.unwrap_or(df.d_ref_over_lambda),
                corr_base: f.corr_base.unwrap_or(df.corr_base),
            },
            tie_kappa: f.tie_kappa.unwrap_or(false),
            k: r.k.unwrap_or(d.k),
            pt: r.pt.map_or(d.pt, |q| q.linear),
            sigma_n_sq: r.sigma_n_sq.map_or(d.sigma_n_sq, |q| q.linear),
            rho: r.rho.map(|q| q.linear),
            omega_th: r.omega_th.map_or(d.omega_th, |q| q.linear),
            ber_p: r.ber_p.unwrap_or(d.ber_p),
            ber_q: r.ber_q.unwrap_or(d.ber_q),
            architectures,
            trials: r.trials.unwrap_or(d.trials),
            seed: r.seed.unwrap_or(d.seed),
            sweep: Sweep {
                var: r.sweep,
                grid: r.grid,
            },
            theory: r.theory.unwrap_or(false),
            eps: r.eps.unwrap_or(d.eps),
            max_iter: r.max_iter.unwrap_or(d.max_iter),
            w_init,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[geometry]
M = 4
d_t = 50
d_r = [30]

[fading]
kappa_g = "-10 dB"
kappa_h = ["-10 dB"]
C0 = "-30 dB"

[run]
mode = "mimo"
K = 2
Pt = "50 mW"
sigma_n_sq = "-90 dBm"
architectures = ["conventional", "nondiag"]
trials = 20
seed = 7
sweep = "N"
grid = [16, 32]
"#;

    #[test]
    fn units() {
        let q: Quantity = "-90 dBm".parse().unwrap();
        assert!((q.linear - 1e-12).abs() < 1e-24);
        let q: Quantity = "50 mW".parse().unwrap();
        assert!((q.linear - 0.05).abs() < 1e-15);
        let q: Quantity = "-30dB".parse().unwrap();
        assert!((q.linear - 1e-3).abs() < 1e-15);
        assert_eq!("2 W".parse::<Quantity>().unwrap().linear, 2.0);
        assert_eq!("0.25".parse::<Quantity>().unwrap().unit, Unit::Linear);
        assert!("ten dB".parse::<Quantity>().is_err());
    }

    #[test]
    fn parses_sample() {
        let c = ScenarioConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.mode, Mode::Mimo);
        assert_eq!(c.k, 2);
        assert!((c.fading.kappa_g - 0.1).abs() < 1e-15);
        assert!((c.sigma_n_sq - 1e-12).abs() < 1e-24);
        assert_eq!(c.sweep.grid.len(), 2);
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn unknown_key_names_key_and_line() {
        let text = SAMPLE.replace("d_t = 50", "d_t = 50\nspacing = 3");
        let msg = ScenarioConfig::from_toml(&text).unwrap_err().to_string();
        assert!(msg.contains("spacing"), "{msg}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn invariants_enforced() {
        let text = SAMPLE.replace("trials = 20", "trials = 0");
        assert!(ScenarioConfig::from_toml(&text).is_err());
        let text = SAMPLE.replace("grid = [16, 32]", "grid = []");
        assert!(ScenarioConfig::from_toml(&text).is_err());
        let text = SAMPLE.replace("K = 2", "K = 5");
        assert!(ScenarioConfig::from_toml(&text).is_err());
        let text = SAMPLE.replace("kappa_g = \"-10 dB\"", "kappa_g = -1");
        assert!(ScenarioConfig::from_toml(&text).is_err());
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(grid_shape(64), (8, 8));
        assert_eq!(grid_shape(32), (8, 4));
        assert_eq!(grid_shape(7), (7, 1));
        assert_eq!(grid_shape(1), (1, 1));
    }

    #[test]
    fn angles_follow_seed() {
        let c = ScenarioConfig::default();
        assert_eq!(c.resolved_angles(), c.resolved_angles());
        let other = ScenarioConfig { seed: 2, ..c.clone() };
        assert_ne!(c.resolved_angles(), other.resolved_angles());
    }
}
