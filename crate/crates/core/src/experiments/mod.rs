//! Simulation studies: scenario grids, replicate execution, relative bias,
//! rejection rates and prevalence sensitivity.

mod config;
mod metrics;
mod output;
mod run;

pub use config::{parse_config, ExperimentConfig};
pub use metrics::{relative_bias, summarize, MetricsRow, SensitivityRow};
pub use output::{
    metrics_csv_header, replicate_csv_header, run_experiment, run_sensitivity, sensitivity_csv_header,
    write_metrics_row, write_replicate_row, write_sensitivity_row, RunManifest,
};
pub use run::{
    analyze, replicate_rng, run_scenario, run_scenario_with_progress, sensitivity_run, sensitivity_run_with_progress,
    simulate_replicate, MethodOutcome, ReplicateData, ReplicateRecord, ScenarioResult, SensitivityResult,
    RNG_DESCRIPTION,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::likelihood::Sidedness;
use crate::model::RelativeRisks;
use crate::simulate::{AscertainmentSpec, PopulationModel};

/// Relative-risk settings (R1, R2, R_im, S1, S2) of the standard grid.
pub const TABLE2_SETTINGS: [[f64; 5]; 8] = [
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [2.0, 3.0, 1.0, 1.0, 1.0],
    [1.0, 3.0, 1.0, 1.0, 1.0],
    [1.0, 3.0, 1.0, 2.0, 2.0],
    [1.0, 3.0, 3.0, 1.0, 1.0],
    [3.0, 3.0, 1.0 / 3.0, 1.0, 1.0],
    [1.0, 3.0, 3.0, 2.0, 2.0],
    [3.0, 3.0, 1.0 / 3.0, 2.0, 2.0],
];

pub fn table2_setting(setting: u8) -> Result<RelativeRisks<f64>> {
    let [r1, r2, r_im, s1, s2] = *TABLE2_SETTINGS
        .get((setting as usize).wrapping_sub(1))
        .ok_or_else(|| Error::Config(format!("risk setting {setting} is not in 1..8")))?;
    RelativeRisks::new(r1, r2, r_im, s1, s2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Method {
    #[serde(rename = "lime-mix")]
    LimeMix,
    #[serde(rename = "lime-pair")]
    LimePair,
    #[serde(rename = "ll-lrt")]
    LlLrt,
    #[serde(rename = "cll")]
    Cll,
    #[serde(rename = "cll-drop11")]
    CllDrop11,
}

impl Method {
    pub const ALL: [Method; 5] = [Self::LimeMix, Self::LimePair, Self::LlLrt, Self::Cll, Self::CllDrop11];

    pub fn name(self) -> &'static str {
        match self {
            Self::LimeMix => "lime-mix",
            Self::LimePair => "lime-pair",
            Self::LlLrt => "ll-lrt",
            Self::Cll => "cll",
            Self::CllDrop11 => "cll-drop11",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}` (expected lime-mix, lime-pair, ll-lrt, cll or cll-drop11)")))
    }
}

/// One cell of a simulation grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub label: String,
    /// Standard setting number, or `None` for custom risks.
    pub setting: Option<u8>,
    pub risks: RelativeRisks<f64>,
    pub population_label: String,
    pub vaf_label: String,
    pub population: PopulationModel,
    /// True prevalence (components without their own prevalence use it).
    pub prevalence: f64,
    /// Prevalence handed to the estimators; the population prevalence when
    /// absent.
    pub analysis_prevalence: Option<f64>,
    pub ascertainment: AscertainmentSpec,
    pub methods: Vec<Method>,
    pub replicates: usize,
    pub base_seed: u64,
    pub alpha: f64,
    pub sidedness: Sidedness,
}

impl ScenarioConfig {
    /// A standard-grid scenario under Hardy-Weinberg proportions with the
    /// default 150 + 150 design.
    pub fn standard(setting: u8, vaf: f64, prevalence: f64) -> Result<Self> {
        Ok(Self {
            label: format!("s{setting}_hwe_vaf{vaf}_prev{prevalence}"),
            setting: Some(setting),
            risks: table2_setting(setting)?,
            population_label: "hwe".into(),
            vaf_label: vaf.to_string(),
            population: PopulationModel::hwe(vaf),
            prevalence,
            analysis_prevalence: None,
            ascertainment: AscertainmentSpec::default(),
            methods: vec![Method::LimeMix],
            replicates: 300,
            base_seed: 1,
            alpha: 0.05,
            sidedness: Sidedness::Two,
        })
    }

    pub fn setting_label(&self) -> String {
        self.setting.map(|s| s.to_string()).unwrap_or_else(|| "custom".into())
    }
}
