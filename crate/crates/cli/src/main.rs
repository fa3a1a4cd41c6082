//! `risnd`: run scenarios, evaluate closed forms and reproduce figures.
//!
//! Seed precedence: `--seed`, then `RIS_ND_SEED`, then the config file.
//! `--trials` likewise overrides the config.

mod grid;
mod output;
mod selftest;

use clap::{Parser, Subcommand, ValueEnum};
use output::{write_run, Manifest};
use risnd_core::experiments::{
    figure_presets, grid_shape, run_scenario, run_theory, write_csv, Mode, Quantity, ScenarioConfig, Sweep, SweepVar,
    FIGURE_IDS,
};
use risnd_core::phase::Architecture;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config not found: {}", .0.display())]
    ConfigNotFound(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] risnd_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use risnd_core::Error as E;
        match self {
            CliError::ConfigNotFound(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Core(E::Config(_) | E::InvalidParameter { .. }) => 2,
            CliError::Core(E::Io(_)) => 4,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "risnd", version, about = "Non-diagonal RIS simulation toolkit")]
struct Cli {
    /// Worker threads for Monte Carlo trials (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Output root; each run writes `<out>/<id>/results.csv` and `manifest.json`.
    #[arg(long, default_value = "runs")]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expr {
    Gain,
    Outage,
    Ber,
    Complexity,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the scenario described by a TOML config.
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a closed-form expression over a grid.
    Theory(TheoryArgs),
    /// Reproduce a figure preset (`all` for every figure).
    Figure {
        id: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var("RIS_ND_SEED") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| {
            risnd_core::Error::Config(format!("RIS_ND_SEED must be an unsigned integer, got `{s}`")).into()
        }),
        Err(_) => Ok(None),
    }
}

fn apply_overrides(cfg: &mut ScenarioConfig, run: &RunArgs) -> Result<(), CliError> {
    if let Some(s) = run.seed.map(Some).unwrap_or(env_seed()?) {
        cfg.seed = s;
    }
    if let Some(t) = run.trials {
        cfg.trials = t;
    }
    cfg.angles = Some(cfg.resolved_angles());
    cfg.validate()?;
    Ok(())
}

fn execute(dir: &Path, mut cfgs: Vec<ScenarioConfig>, run: &RunArgs) -> Result<(), CliError> {
    let started = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let clock = Instant::now();
    let mut records = Vec::new();
    for cfg in &mut cfgs {
        apply_overrides(cfg, run)?;
        let t = Instant::now();
        let rows = run_scenario(cfg)?;
        eprintln!("{}: {} rows in {:.1}s", cfg.id, rows.len(), t.elapsed().as_secs_f64());
        records.extend(rows);
    }
    let manifest = Manifest::new(started, clock.elapsed(), records.len(), &cfgs);
    let csv = write_run(dir, &records, &manifest)?;
    eprintln!("wrote {}", csv.display());
    Ok(())
}

fn simulate(path: &Path, run: &RunArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => CliError::ConfigNotFound(path.to_path_buf()),
        _ => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
    })?;
    let cfg =
        ScenarioConfig::from_toml(&text).map_err(|e| risnd_core::Error::Config(format!("{}: {e}", path.display())))?;
    let dir = run.out.join(&cfg.id);
    execute(&dir, vec![cfg], run)
}

fn figure(id: &str, run: &RunArgs) -> Result<(), CliError> {
    let ids: Vec<&str> = if id == "all" { FIGURE_IDS.to_vec() } else { vec![id] };
    for f in ids {
        execute(&run.out.join(format!("fig{f}")), figure_presets(f)?, run)?;
    }
    Ok(())
}

#[derive(clap::Args)]
struct TheoryArgs {
    #[arg(long, value_enum)]
    expr: Expr,
    /// RIS sizes, e.g. `4,16,64` or `1..64` (BER: a single value).
    #[arg(long = "N", allow_hyphen_values = true)]
    n: Option<String>,
    /// Rician factor of G (and of h unless --kappa-h is given).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    kappa: String,
    #[arg(long = "kappa-h", allow_hyphen_values = true)]
    kappa_h: Option<String>,
    /// Group size of the group-connected reference.
    #[arg(long = "G")]
    g: Option<usize>,
    /// Reference SNR; a grid for BER, a single value otherwise.
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    #[arg(long = "omega-th", allow_hyphen_values = true)]
    omega_th: Option<String>,
    /// Write `<out>/theory-<expr>/`; prints CSV to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn theory_config(a: &TheoryArgs) -> Result<ScenarioConfig, CliError> {
    let n_grid = |default: &str| grid::parse_grid(a.n.as_deref().unwrap_or(default));
    let mut cfg = match a.expr {
        Expr::Gain | Expr::Complexity => {
            let mut archs = vec![
                Architecture::Conventional,
                Architecture::NonDiagonal,
                Architecture::FullyConnected,
            ];
            let g = match a.expr {
                Expr::Complexity => Some(a.g.unwrap_or(4)),
                _ => a.g,
            };
            archs.extend(g.map(Architecture::GroupConnected));
            ScenarioConfig {
                mode: if a.expr == Expr::Gain {
                    Mode::Gain
                } else {
                    Mode::Complexity
                },
                m: 1,
                architectures: archs,
                sweep: Sweep {
                    var: SweepVar::N,
                    grid: n_grid("4,8,16,32,64,128,256")?,
                },
                ..ScenarioConfig::default()
            }
        }
        Expr::Outage => {
            let mut c = figure_presets("8a")?.remove(0);
            c.sweep = Sweep {
                var: SweepVar::N,
                grid: n_grid("8,16,32,64")?,
            };
            c
        }
        Expr::Ber => {
            let mut c = figure_presets("8b")?.remove(0);
            let n = grid::parse_single(a.n.as_deref().unwrap_or("4"))?.linear;
            if n < 1.0 || n.fract() != 0.0 {
                return Err(risnd_core::Error::Config(format!("N must be a whole number, got {n}")).into());
            }
            (c.n_x, c.n_y) = grid_shape(n as usize);
            if let Some(r) = &a.rho {
                c.sweep.grid = grid::parse_grid(r)?;
            }
            c
        }
    };
    let name = match a.expr {
        Expr::Gain => "gain",
        Expr::Outage => "outage",
        Expr::Ber => "ber",
        Expr::Complexity => "complexity",
    };
    cfg.id = format!("theory-{name}");
    cfg.figure = String::new();
    cfg.theory = true;
    let kg: Quantity = a.kappa.parse()?;
    cfg.fading.kappa_g = kg.linear;
    cfg.fading.kappa_h = vec![match &a.kappa_h {
        Some(s) => s.parse::<Quantity>()?.linear,
        None => kg.linear,
    }];
    let rician = cfg.fading.kappa_g != 0.0 || cfg.fading.kappa_h[0] != 0.0;
    if rician && matches!(a.expr, Expr::Outage | Expr::Ber) {
        return Err(risnd_core::Error::Config(
            "outage and BER closed forms are for Rayleigh fading (kappa = 0)".into(),
        )
        .into());
    }
    if let Some(w) = &a.omega_th {
        cfg.omega_th = grid::parse_single(w)?.linear;
    }
    if let Some(r) = &a.rho {
        if a.expr != Expr::Ber {
            cfg.rho = Some(grid::parse_single(r)?.linear);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn theory(a: &TheoryArgs) -> Result<(), CliError> {
    let started = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let clock = Instant::now();
    let cfg = theory_config(a)?;
    let records = run_theory(&cfg)?;
    match &a.out {
        Some(root) => {
            let cfgs = [cfg];
            let manifest = Manifest::new(started, clock.elapsed(), records.len(), &cfgs);
            let csv = write_run(&root.join(&cfgs[0].id), &records, &manifest)?;
            eprintln!("wrote {}", csv.display());
        }
        None => write_csv(&records, std::io::stdout().lock())?,
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(risnd_core::Error::Config("--jobs must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| risnd_core::Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.cmd {
        Cmd::Simulate { config, run } => simulate(&config, &run)?,
        Cmd::Figure { id, run } => figure(&id, &run)?,
        Cmd::Theory(args) => theory(&args)?,
        Cmd::Selftest => {
            let failed = selftest::run();
            if failed > 0 {
                eprintln!("selftest: {failed} check(s) failed");
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
