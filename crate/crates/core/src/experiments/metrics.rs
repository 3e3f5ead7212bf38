use serde::Serialize;

use super::run::{MethodOutcome, ReplicateRecord};
use super::{Method, ScenarioConfig};
use crate::error::{Error, Result};
use crate::likelihood::HypothesisKind;
use crate::model::Param;

/// (estimate - truth) / truth
pub fn relative_bias(estimate: f64, truth: f64) -> Result<f64> {
    if truth == 0.0 || !truth.is_finite() {
        return Err(Error::Domain(format!("relative bias is undefined for true value {truth}")));
    }
    Ok((estimate - truth) / truth)
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn median(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    Some(if n % 2 == 1 { s[n / 2] } else { (s[n / 2 - 1] + s[n / 2]) / 2.0 })
}

/// Summary of one method in one scenario. Bias and rejection rates use only
/// replicates whose fits converged; the rest are counted in `failures`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub scenario: String,
    pub setting: String,
    pub population: String,
    pub vaf: String,
    pub prevalence: f64,
    pub analysis_prevalence: f64,
    pub method: Method,
    pub replicates: usize,
    pub converged: usize,
    pub failures: usize,
    /// Indexed by [`Param::ALL`]; `None` when the method does not estimate
    /// the parameter or no replicate converged.
    pub bias_mean: [Option<f64>; 6],
    pub bias_median: [Option<f64>; 6],
    /// Indexed by [`HypothesisKind::ALL`].
    pub reject: [Option<f64>; 3],
}

pub fn summarize(
    config: &ScenarioConfig,
    analysis_prevalence: f64,
    method: Method,
    truth: &[Option<f64>; 6],
    outcomes: &[&MethodOutcome],
) -> MetricsRow {
    let ok: Vec<&MethodOutcome> = outcomes.iter().copied().filter(|o| o.usable()).collect();
    let mut bias_mean = [None; 6];
    let mut bias_median = [None; 6];
    for p in Param::ALL {
        let Some(t) = truth[p.index()] else { continue };
        let biases: Vec<f64> = ok
            .iter()
            .filter_map(|o| o.estimate(p))
            .filter_map(|e| relative_bias(e, t).ok())
            .collect();
        bias_mean[p.index()] = mean(&biases);
        bias_median[p.index()] = median(&biases);
    }
    let mut reject = [None; 3];
    for k in HypothesisKind::ALL {
        let ps: Vec<f64> = ok.iter().filter_map(|o| o.p_value(k)).collect();
        if !ps.is_empty() {
            reject[k as usize] = Some(ps.iter().filter(|&&p| p < config.alpha).count() as f64 / ps.len() as f64);
        }
    }
    MetricsRow {
        scenario: config.label.clone(),
        setting: config.setting_label(),
        population: config.population_label.clone(),
        vaf: config.vaf_label.clone(),
        prevalence: config.prevalence,
        analysis_prevalence,
        method,
        replicates: outcomes.len(),
        converged: ok.len(),
        failures: outcomes.len() - ok.len(),
        bias_mean,
        bias_median,
        reject,
    }
}

/// Paired comparison of estimates at a misspecified prevalence against the
/// estimates from the same datasets at the true prevalence, scaled by the
/// true parameter value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub scenario: String,
    pub setting: String,
    pub method: Method,
    pub multiplier: f64,
    pub analysis_prevalence: f64,
    pub parameter: Param,
    pub pairs: usize,
    pub median_abs_rel_diff: Option<f64>,
    pub max_abs_rel_diff: Option<f64>,
}

pub(crate) fn sensitivity_rows(
    config: &ScenarioConfig,
    method: Method,
    multiplier: f64,
    prevalence: f64,
    truth: &[Option<f64>; 6],
    baseline: &[ReplicateRecord],
    misspecified: &[ReplicateRecord],
) -> Vec<SensitivityRow> {
    let base: Vec<&ReplicateRecord> = baseline.iter().filter(|r| r.method == method).collect();
    let mis: Vec<&ReplicateRecord> = misspecified.iter().filter(|r| r.method == method).collect();
    let mut rows = Vec::new();
    for p in Param::ALL {
        let Some(t) = truth[p.index()] else { continue };
        let mut diffs = Vec::new();
        let mut estimated = false;
        for (a, b) in base.iter().zip(&mis) {
            debug_assert_eq!(a.replicate, b.replicate);
            if let (Some(x), Some(y)) = (a.outcome.estimate(p), b.outcome.estimate(p)) {
                estimated = true;
                if a.outcome.usable() && b.outcome.usable() {
                    diffs.push(((y - x) / t).abs());
                }
            }
        }
        if !estimated && !base.is_empty() {
            continue;
        }
        rows.push(SensitivityRow {
            scenario: config.label.clone(),
            setting: config.setting_label(),
            method,
            multiplier,
            analysis_prevalence: prevalence,
            parameter: p,
            pairs: diffs.len(),
            median_abs_rel_diff: median(&diffs),
            max_abs_rel_diff: diffs.iter().cloned().reduce(f64::max),
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_bias_examples() {
        assert!((relative_bias(2.2, 2.0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(relative_bias(1.7, 1.7).unwrap(), 0.0);
        assert!((relative_bias(0.3, 1.0 / 3.0).unwrap() + 0.1).abs() < 1e-15);
        assert!(matches!(relative_bias(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }
}
