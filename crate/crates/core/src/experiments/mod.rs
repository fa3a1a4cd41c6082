//! Scenario configuration, the Monte Carlo harness, figure presets and CSV
//! output.
//!
//! CSV columns: `scenario_id, figure, sweep_name, sweep_value, architecture,
//! metric, mean, stderr, trials, failures, seed`. Closed-form rows use an
//! `architecture` of the form `theory:<arch>` (or `asymptote:<arch>`) and
//! report `trials = 0`.

mod config;
mod harness;
mod presets;
mod rate;

pub use config::{grid_shape, Mode, Quantity, ScenarioConfig, Sweep, SweepVar, Unit};
pub use harness::{reference_snr, run_samples, run_scenario, run_theory, trial_rng, MetricRecord, PointSamples};
pub use presets::{figure_presets, FIGURE_IDS};
pub use rate::{achievable_rate, equivalent_channel, RateMode};

use crate::error::{Error, Result};
use std::io::Write;

/// Writes `records` as CSV with a header row.
pub fn write_csv<W: Write>(records: &[MetricRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

pub const CSV_HEADER: [&str; 11] = [
    "scenario_id",
    "figure",
    "sweep_name",
    "sweep_value",
    "architecture",
    "metric",
    "mean",
    "stderr",
    "trials",
    "failures",
    "seed",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let r = MetricRecord {
            scenario_id: "s".into(),
            figure: "5".into(),
            sweep_name: "N".into(),
            sweep_value: 4.0,
            architecture: "nondiag".into(),
            metric: "gain".into(),
            mean: 0.5,
            stderr: 0.01,
            trials: 10,
            failures: 0,
            seed: 1,
        };
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.next().unwrap(), "s,5,N,4.0,nondiag,gain,0.5,0.01,10,0,1");
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), CSV_HEADER.join(","));
    }
}
