use crate::CliError;
use risnd_core::experiments::{write_csv, MetricRecord, ScenarioConfig};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

/// Everything needed to rerun a results file bit for bit.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub started_at: String,
    pub wall_time_s: f64,
    pub threads: usize,
    pub rows: usize,
    pub results: &'static str,
    /// Configs as run: overrides applied, LoS angles resolved.
    pub scenarios: &'a [ScenarioConfig],
}

impl<'a> Manifest<'a> {
    pub fn new(started_at: String, wall: Duration, rows: usize, scenarios: &'a [ScenarioConfig]) -> Self {
        Self {
            tool: "risnd",
            version: env!("CARGO_PKG_VERSION"),
            command: std::env::args().collect(),
            started_at,
            wall_time_s: wall.as_secs_f64(),
            threads: rayon::current_num_threads(),
            rows,
            results: "results.csv",
            scenarios,
        }
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `dir/results.csv` and `dir/manifest.json`; returns the CSV path.
pub fn write_run(dir: &Path, records: &[MetricRecord], manifest: &Manifest) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let csv = dir.join("results.csv");
    let file = fs::File::create(&csv).map_err(io(&csv))?;
    write_csv(records, std::io::BufWriter::new(file))?;
    let man = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(manifest).expect("manifest is plain data");
    fs::write(&man, text + "\n").map_err(io(&man))?;
    Ok(csv)
}
