//! CSV layouts, the run manifest, and the drivers that write a whole grid to
//! an output directory, flushing after every scenario.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::metrics::{MetricsRow, SensitivityRow};
use super::run::{run_scenario_with_progress, sensitivity_run_with_progress, ReplicateRecord, RNG_DESCRIPTION};
use super::ExperimentConfig;
use crate::error::Result;
use crate::likelihood::HypothesisKind;
use crate::model::Param;

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn metrics_csv_header() -> String {
    let mut cols: Vec<String> = [
        "scenario",
        "setting",
        "population",
        "vaf",
        "prevalence",
        "analysis_prevalence",
        "method",
        "replicates",
        "converged",
        "failures",
    ]
    .map(String::from)
    .to_vec();
    for stat in ["mean", "median"] {
        cols.extend(Param::ALL.iter().map(|p| format!("bias_{stat}_{p}")));
    }
    cols.extend(HypothesisKind::ALL.iter().map(|k| format!("reject_{k}")));
    cols.join(",")
}

pub fn write_metrics_row(r: &MetricsRow) -> String {
    let mut s = format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.scenario,
        r.setting,
        r.population,
        r.vaf,
        r.prevalence,
        r.analysis_prevalence,
        r.method,
        r.replicates,
        r.converged,
        r.failures
    );
    for v in r.bias_mean.iter().chain(&r.bias_median).chain(&r.reject) {
        write!(s, ",{}", opt(*v)).unwrap();
    }
    s
}

pub fn replicate_csv_header() -> String {
    let mut cols: Vec<String> =
        ["scenario", "analysis_prevalence", "replicate", "method", "converged", "error"].map(String::from).to_vec();
    cols.extend(Param::ALL.iter().map(|p| format!("est_{p}")));
    cols.extend(HypothesisKind::ALL.iter().map(|k| format!("p_{k}")));
    cols.join(",")
}

pub fn write_replicate_row(scenario: &str, r: &ReplicateRecord) -> String {
    let error = r.outcome.error.as_deref().unwrap_or("").replace([',', '\n', '\r'], ";");
    let mut s = format!(
        "{scenario},{},{},{},{},{error}",
        r.analysis_prevalence, r.replicate, r.method, r.outcome.converged
    );
    for v in r.outcome.estimates.iter().chain(&r.outcome.p_values) {
        write!(s, ",{}", opt(*v)).unwrap();
    }
    s
}

pub fn sensitivity_csv_header() -> &'static str {
    "scenario,setting,method,multiplier,analysis_prevalence,parameter,pairs,median_abs_rel_diff,max_abs_rel_diff"
}

pub fn write_sensitivity_row(r: &SensitivityRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.scenario,
        r.setting,
        r.method,
        r.multiplier,
        r.analysis_prevalence,
        r.parameter,
        r.pairs,
        opt(r.median_abs_rel_diff),
        opt(r.max_abs_rel_diff)
    )
}

/// Describes one invocation and its outputs. File paths are relative to
/// the output directory. There is no timestamp unless one is supplied, so
/// repeated runs produce identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub rng: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub scenarios: usize,
    pub completed_scenarios: usize,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: BTreeMap<String, String>, seed: u64) -> Self {
        Self {
            tool: "lime".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand.into(),
            config,
            seed,
            rng: RNG_DESCRIPTION.into(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            scenarios: 0,
            completed_scenarios: 0,
            complete: false,
            timestamp_unix: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join("manifest.json"), self.to_json())?;
        Ok(())
    }
}

struct Sink {
    out: BufWriter<File>,
}

impl Sink {
    fn create(path: &Path, header: &str) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{header}")?;
        Ok(Self { out })
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Runs every scenario of `config`, writing `metrics.csv`,
/// `replicates.csv` and `manifest.json` under `dir`. The manifest is marked
/// incomplete until the last scenario has been flushed. `progress` receives
/// (scenario index, replicates done, replicates total).
pub fn run_experiment(
    config: &ExperimentConfig,
    dir: &Path,
    mut manifest: RunManifest,
    progress: &mut dyn FnMut(usize, usize, usize),
) -> Result<RunManifest> {
    fs::create_dir_all(dir)?;
    manifest.outputs = vec!["metrics.csv".into(), "replicates.csv".into()];
    manifest.scenarios = config.scenarios.len();
    manifest.write(dir)?;
    let mut metrics = Sink::create(&dir.join("metrics.csv"), &metrics_csv_header())?;
    let mut reps = Sink::create(&dir.join("replicates.csv"), &replicate_csv_header())?;
    for (i, scenario) in config.scenarios.iter().enumerate() {
        let result = run_scenario_with_progress(scenario, &mut |done, total| progress(i, done, total))?;
        for r in &result.records {
            reps.line(&write_replicate_row(&scenario.label, r))?;
        }
        for row in &result.rows {
            metrics.line(&write_metrics_row(row))?;
        }
        reps.flush()?;
        metrics.flush()?;
        manifest.completed_scenarios = i + 1;
        manifest.write(dir)?;
    }
    manifest.complete = true;
    manifest.write(dir)?;
    Ok(manifest)
}

/// Prevalence sensitivity over every scenario: `metrics.csv` holds one row
/// per (scenario, analysis prevalence, method), `sensitivity.csv` the paired
/// comparisons against the true-prevalence fits.
pub fn run_sensitivity(
    config: &ExperimentConfig,
    dir: &Path,
    mut manifest: RunManifest,
    progress: &mut dyn FnMut(usize, usize, usize),
) -> Result<RunManifest> {
    fs::create_dir_all(dir)?;
    manifest.outputs = vec!["metrics.csv".into(), "sensitivity.csv".into(), "replicates.csv".into()];
    manifest.scenarios = config.scenarios.len();
    manifest.write(dir)?;
    let mut metrics = Sink::create(&dir.join("metrics.csv"), &metrics_csv_header())?;
    let mut sens = Sink::create(&dir.join("sensitivity.csv"), sensitivity_csv_header())?;
    let mut reps = Sink::create(&dir.join("replicates.csv"), &replicate_csv_header())?;
    for (i, scenario) in config.scenarios.iter().enumerate() {
        let result = sensitivity_run_with_progress(scenario, &config.multipliers, &mut |done, total| {
            progress(i, done, total)
        })?;
        let all_records = std::iter::once(&result.baseline.records).chain(result.misspecified.iter().map(|(_, r, _)| r));
        for records in all_records {
            for r in records {
                reps.line(&write_replicate_row(&scenario.label, r))?;
            }
        }
        let all_rows = std::iter::once(&result.baseline.rows).chain(result.misspecified.iter().map(|(_, _, r)| r));
        for rows in all_rows {
            for row in rows {
                metrics.line(&write_metrics_row(row))?;
            }
        }
        for row in &result.comparisons {
            sens.line(&write_sensitivity_row(row))?;
        }
        reps.flush()?;
        metrics.flush()?;
        sens.flush()?;
        manifest.completed_scenarios = i + 1;
        manifest.write(dir)?;
    }
    manifest.complete = true;
    manifest.write(dir)?;
    Ok(manifest)
}
