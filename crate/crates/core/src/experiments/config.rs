//! Flat `key = value` configuration. `#` starts a comment; list values are
//! comma-separated and the list-valued grid keys (`setting`, `population`,
//! `vaf`, `prevalence`) expand into one scenario per combination.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::{table2_setting, Method, ScenarioConfig};
use crate::error::{Error, Result};
use crate::likelihood::Sidedness;
use crate::model::RelativeRisks;
use crate::simulate::{mixture_population, AscertainmentSpec, PopulationComponent, PopulationModel};

const DEFAULTS: [(&str, &str); 25] = [
    ("name", ""),
    ("setting", "1"),
    ("r1", "1"),
    ("r2", "1"),
    ("r_im", "1"),
    ("s1", "1"),
    ("s2", "1"),
    ("population", "hwe"),
    ("vaf", "0.3"),
    ("zeta_male", "0.1"),
    ("zeta_female", "0.3"),
    ("mixture_vaf", "0.1,0.3"),
    ("mixture_weights", ""),
    ("mixture_prevalence", ""),
    ("prevalence", "0.05"),
    ("analysis_prevalence", ""),
    ("cases", "150"),
    ("controls", "150"),
    ("missing_father_prob", "0.5"),
    ("methods", "lime-mix"),
    ("replicates", "300"),
    ("seed", "1"),
    ("alpha", "0.05"),
    ("sided", "two"),
    ("multipliers", "0.8,0.95,1.05,1.2"),
];

/// A parsed configuration: the effective key/value pairs (defaults filled
/// in) and the expanded scenario grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub values: BTreeMap<String, String>,
    pub scenarios: Vec<ScenarioConfig>,
    pub multipliers: Vec<f64>,
    pub seed: u64,
    pub replicates: usize,
}

struct Source {
    values: BTreeMap<String, (String, String)>,
}

impl Source {
    fn raw(&self, key: &str) -> (&str, &str) {
        let (v, origin) = &self.values[key];
        (v.as_str(), origin.as_str())
    }

    fn fail(&self, key: &str, msg: impl std::fmt::Display) -> Error {
        let (v, origin) = self.raw(key);
        let msg = msg.to_string();
        let msg = msg.strip_prefix("configuration error: ").unwrap_or(&msg);
        Error::Config(format!("{origin}: key `{key}` = `{v}`: {msg}"))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let (v, _) = self.raw(key);
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(',')
            .map(|item| item.trim().parse::<T>().map_err(|_| self.fail(key, format!("cannot parse `{}`", item.trim()))))
            .collect()
    }

    fn one<T: FromStr>(&self, key: &str) -> Result<T> {
        let items: Vec<T> = self.list(key)?;
        let n = items.len();
        let mut it = items.into_iter();
        match (it.next(), n) {
            (Some(x), 1) => Ok(x),
            _ => Err(self.fail(key, "expected a single value")),
        }
    }

    fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        if self.raw(key).0.is_empty() {
            Ok(None)
        } else {
            self.one(key).map(Some)
        }
    }

    fn nonempty<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let v: Vec<T> = self.list(key)?;
        if v.is_empty() {
            return Err(self.fail(key, "expected at least one value"));
        }
        Ok(v)
    }
}

/// Parses configuration text. `overrides` (e.g. from command-line flags)
/// replace file values of the same key.
pub fn parse_config(text: &str, overrides: &[(&str, String)]) -> Result<ExperimentConfig> {
    let known = |k: &str| DEFAULTS.iter().any(|(d, _)| *d == k);
    let mut values: BTreeMap<String, (String, String)> = DEFAULTS
        .iter()
        .map(|(k, v)| (k.to_string(), (v.to_string(), "default".to_string())))
        .collect();
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {lineno}: expected `key = value`, found `{line}`")))?;
        let key = key.trim();
        if !known(key) {
            return Err(Error::Config(format!("line {lineno}: unknown key `{key}`")));
        }
        if let Some(prev) = seen.insert(key.to_string(), lineno) {
            return Err(Error::Config(format!("line {lineno}: key `{key}` already set on line {prev}")));
        }
        values.insert(key.to_string(), (value.trim().to_string(), format!("line {lineno}")));
    }
    for (key, value) in overrides {
        if !known(key) {
            return Err(Error::Config(format!("unknown override key `{key}`")));
        }
        values.insert(key.to_string(), (value.clone(), "command line".to_string()));
    }
    build(Source { values })
}

fn risks_for(src: &Source, setting: &str) -> Result<(Option<u8>, RelativeRisks<f64>)> {
    if setting == "custom" {
        let r = RelativeRisks::new(src.one("r1")?, src.one("r2")?, src.one("r_im")?, src.one("s1")?, src.one("s2")?)
            .map_err(|e| src.fail("setting", e))?;
        return Ok((None, r));
    }
    let n: u8 = setting.parse().map_err(|_| src.fail("setting", format!("`{setting}` is neither 1..8 nor custom")))?;
    Ok((Some(n), table2_setting(n).map_err(|e| src.fail("setting", e))?))
}

fn population_for(src: &Source, kind: &str, vaf: f64) -> Result<(PopulationModel, String)> {
    match kind {
        "hwe" => Ok((PopulationModel::hwe(vaf), vaf.to_string())),
        "inbred" => Ok((PopulationModel::inbred(vaf, src.one("zeta_male")?, src.one("zeta_female")?), vaf.to_string())),
        "mixture" => {
            let vafs: Vec<f64> = src.nonempty("mixture_vaf")?;
            let n = vafs.len();
            let mut weights: Vec<f64> = src.list("mixture_weights")?;
            if weights.is_empty() {
                weights = vec![1.0 / n as f64; n];
            }
            if weights.len() != n {
                return Err(src.fail("mixture_weights", format!("expected {n} weights")));
            }
            let prevs: Vec<f64> = src.list("mixture_prevalence")?;
            if !prevs.is_empty() && prevs.len() != n {
                return Err(src.fail("mixture_prevalence", format!("expected {n} prevalences")));
            }
            let comps = (0..n)
                .map(|i| PopulationComponent {
                    weight: weights[i],
                    prevalence: prevs.get(i).copied(),
                    ..PopulationComponent::hwe(vafs[i])
                })
                .collect();
            let pop = mixture_population(comps).map_err(|e| src.fail("mixture_weights", e))?;
            let label = vafs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("/");
            Ok((pop, label))
        }
        other => Err(src.fail("population", format!("unknown population `{other}` (expected hwe, inbred or mixture)"))),
    }
}

fn build(src: Source) -> Result<ExperimentConfig> {
    let settings: Vec<String> = src.nonempty("setting")?;
    let populations: Vec<String> = src.nonempty("population")?;
    let vafs: Vec<f64> = src.nonempty("vaf")?;
    let prevalences: Vec<f64> = src.nonempty("prevalence")?;
    let methods: Vec<Method> = src.nonempty("methods")?;
    let name: String = src.raw("name").0.to_string();
    let ascertainment = AscertainmentSpec {
        target_cases: src.one("cases")?,
        target_controls: src.one("controls")?,
        missing_father_prob: src.one("missing_father_prob")?,
    };
    ascertainment.validate().map_err(|e| src.fail("cases", e))?;
    let replicates: usize = src.one("replicates")?;
    let seed: u64 = src.one("seed")?;
    let alpha: f64 = src.one("alpha")?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(src.fail("alpha", "must lie in (0, 1)"));
    }
    let sidedness: Sidedness = src.one("sided")?;
    let analysis_prevalence: Option<f64> = src.optional("analysis_prevalence")?;
    if let Some(p) = analysis_prevalence {
        if !(p > 0.0 && p < 1.0) {
            return Err(src.fail("analysis_prevalence", "must lie in (0, 1)"));
        }
    }
    for &p in &prevalences {
        if !(p > 0.0 && p < 1.0) {
            return Err(src.fail("prevalence", format!("{p} is outside (0, 1)")));
        }
    }
    let multipliers: Vec<f64> = src.list("multipliers")?;
    if multipliers.iter().any(|&k| !(k > 0.0)) {
        return Err(src.fail("multipliers", "multipliers must be positive"));
    }

    let mut scenarios = Vec::new();
    for setting in &settings {
        let (setting_no, risks) = risks_for(&src, setting)?;
        for kind in &populations {
            // The vaf axis does not apply to mixtures, whose allele
            // frequencies come from `mixture_vaf`.
            let axis: &[f64] = if kind == "mixture" { &vafs[..1] } else { &vafs };
            for &vaf in axis {
                if !(vaf > 0.0 && vaf < 1.0) {
                    return Err(src.fail("vaf", format!("{vaf} is outside (0, 1)")));
                }
                let (population, vaf_label) = population_for(&src, kind, vaf)?;
                population.validate().map_err(|e| src.fail("population", e))?;
                for &prevalence in &prevalences {
                    let s = setting_no.map(|n| format!("s{n}")).unwrap_or_else(|| "custom".into());
                    let core = format!("{s}_{kind}_vaf{vaf_label}_prev{prevalence}");
                    let label = if name.is_empty() { core } else { format!("{name}_{core}") };
                    scenarios.push(ScenarioConfig {
                        label,
                        setting: setting_no,
                        risks,
                        population_label: kind.clone(),
                        vaf_label: vaf_label.clone(),
                        population: population.clone(),
                        prevalence,
                        analysis_prevalence,
                        ascertainment,
                        methods: methods.clone(),
                        replicates,
                        base_seed: seed,
                        alpha,
                        sidedness,
                    });
                }
            }
        }
    }
    let values = src.values.into_iter().map(|(k, (v, _))| (k, v)).collect();
    Ok(ExperimentConfig { values, scenarios, multipliers, seed, replicates })
}
