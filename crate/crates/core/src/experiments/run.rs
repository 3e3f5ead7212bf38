use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::metrics::{sensitivity_rows, summarize, MetricsRow, SensitivityRow};
use super::{Method, ScenarioConfig};
use crate::baselines::{cll_test, ll_lrt_test, BaselineOptions, BaselineTest, CllVariant};
use crate::error::{Error, Result};
use crate::likelihood::{test_hypotheses, CountsTable, FitOptions, Hypothesis, HypothesisKind, Sidedness, TestResult};
use crate::model::Param;
use crate::simulate::{ascertain_complete, mask_fathers, tabulate, FamilyGenerator};

/// Replicates handed to the worker pool at a time; progress is reported
/// between batches.
const BATCH: usize = 50;

/// The generator for replicate `replicate`: one ChaCha8 stream per replicate
/// under a shared key derived from `base_seed`.
pub fn replicate_rng(base_seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(replicate);
    rng
}

pub const RNG_DESCRIPTION: &str = "ChaCha8Rng, seed_from_u64(base_seed), stream = replicate index";

/// Views of one simulated dataset: every family with its father, and the
/// same families after father masking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicateData {
    pub complete: CountsTable,
    pub mixed: CountsTable,
}

pub fn simulate_replicate(generator: &FamilyGenerator, config: &ScenarioConfig, replicate: u64) -> Result<ReplicateData> {
    let mut rng = replicate_rng(config.base_seed, replicate);
    let mut records = ascertain_complete(generator, &config.ascertainment, &mut rng)?;
    let complete = tabulate(&records)?;
    mask_fathers(&mut records, config.ascertainment.missing_father_prob, &mut rng);
    Ok(ReplicateData { complete, mixed: tabulate(&records)? })
}

/// Estimates (free parameters only) and p-values of one method on one
/// replicate. p-values are indexed by [`HypothesisKind::ALL`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodOutcome {
    pub estimates: [Option<f64>; 6],
    pub p_values: [Option<f64>; 3],
    pub converged: bool,
    pub error: Option<String>,
}

impl MethodOutcome {
    fn failed(e: Error) -> Self {
        Self { estimates: [None; 6], p_values: [None; 3], converged: false, error: Some(e.to_string()) }
    }

    pub fn usable(&self) -> bool {
        self.converged && self.error.is_none()
    }

    pub fn estimate(&self, p: Param) -> Option<f64> {
        self.estimates[p.index()]
    }

    pub fn p_value(&self, kind: HypothesisKind) -> Option<f64> {
        self.p_values[kind as usize]
    }
}

fn hypotheses(kinds: &[HypothesisKind], sidedness: Sidedness) -> Vec<Hypothesis> {
    kinds
        .iter()
        .map(|&k| if k == HypothesisKind::Imprinting { Hypothesis { kind: k, sidedness } } else { Hypothesis::two_sided(k) })
        .collect()
}

fn from_lime(tests: Vec<TestResult>) -> MethodOutcome {
    let full = &tests[0].full;
    let mut out = MethodOutcome {
        estimates: [None; 6],
        p_values: [None; 3],
        converged: full.converged && tests.iter().all(|t| t.null.converged),
        error: None,
    };
    for p in full.free.iter() {
        out.estimates[p.index()] = Some(full.estimates.get(p));
    }
    for t in &tests {
        out.p_values[t.hypothesis.kind as usize] = Some(t.p_value);
    }
    out
}

fn from_baseline(tests: Vec<BaselineTest>) -> MethodOutcome {
    let full = &tests[0].full;
    let mut out = MethodOutcome {
        estimates: [None; 6],
        p_values: [None; 3],
        converged: full.converged && tests.iter().all(|t| t.null.converged),
        error: None,
    };
    out.estimates[Param::Delta.index()] = full.delta;
    for p in full.free.iter() {
        out.estimates[p.index()] = full.get(p);
    }
    for t in &tests {
        out.p_values[t.hypothesis.kind as usize] = Some(t.p_value);
    }
    out
}

/// Runs one method on the view of the data it is designed for: the masked
/// mixture for LIME-mix, all families reduced to mother-child pairs for
/// LIME-pair and CLL, and the complete case triads for LL-LRT.
pub fn analyze(method: Method, data: &ReplicateData, prevalence: f64, sidedness: Sidedness) -> MethodOutcome {
    use HypothesisKind::{Association, Imprinting, Maternal};
    let all = hypotheses(&[Association, Imprinting, Maternal], sidedness);
    let no_imprinting = hypotheses(&[Association, Maternal], sidedness);
    let result = match method {
        Method::LimeMix => test_hypotheses(&data.mixed, prevalence, &all, &FitOptions::default()).map(from_lime),
        Method::LimePair => {
            test_hypotheses(&data.complete.collapse_to_pairs(), prevalence, &no_imprinting, &FitOptions::pair_only())
                .map(from_lime)
        }
        Method::LlLrt => ll_lrt_test(&data.complete.n1_triad, &all, &BaselineOptions::default()).map(from_baseline),
        Method::Cll | Method::CllDrop11 => {
            let variant = if method == Method::Cll { CllVariant::Full } else { CllVariant::Drop11 };
            cll_test(&data.complete.collapse_to_pairs(), prevalence, &no_imprinting, variant, &BaselineOptions::default())
                .map(from_baseline)
        }
    };
    result.unwrap_or_else(MethodOutcome::failed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub method: Method,
    pub analysis_prevalence: f64,
    pub outcome: MethodOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub analysis_prevalence: f64,
    /// Generating values; delta is unknown for multi-component populations
    /// (each component has its own).
    pub truth: [Option<f64>; 6],
    pub records: Vec<ReplicateRecord>,
    pub rows: Vec<MetricsRow>,
}

struct Prepared {
    generator: FamilyGenerator,
    analysis_prevalence: f64,
    truth: [Option<f64>; 6],
}

fn prepare(config: &ScenarioConfig) -> Result<Prepared> {
    config.ascertainment.validate()?;
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::Config(format!("alpha = {} is outside (0, 1)", config.alpha)));
    }
    let generator = FamilyGenerator::solve(&config.population, &config.risks, config.prevalence)
        .map_err(|e| Error::Config(format!("scenario {}: {e}", config.label)))?;
    let analysis_prevalence = config.analysis_prevalence.unwrap_or_else(|| generator.prevalence());
    check_prevalence(analysis_prevalence)?;
    let mut truth = [None; 6];
    let params = generator.component_params();
    if params.len() == 1 {
        truth[Param::Delta.index()] = Some(params[0].delta());
    }
    for p in Param::RISKS {
        truth[p.index()] = Some(config.risks.get(p));
    }
    Ok(Prepared { generator, analysis_prevalence, truth })
}

fn check_prevalence(prevalence: f64) -> Result<()> {
    if prevalence > 0.0 && prevalence < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("analysis prevalence {prevalence} is outside (0, 1)")))
    }
}

/// Runs replicates in parallel batches; the result order is the replicate
/// order whatever the scheduling.
fn for_replicates<T: Send>(
    n: usize,
    progress: &mut dyn FnMut(usize, usize),
    work: impl Fn(usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let end = (start + BATCH).min(n);
        let batch = (start..end).into_par_iter().map(&work).collect::<Result<Vec<T>>>()?;
        out.extend(batch);
        start = end;
        progress(end, n);
    }
    Ok(out)
}

fn rows_for(config: &ScenarioConfig, prevalence: f64, truth: &[Option<f64>; 6], records: &[ReplicateRecord]) -> Vec<MetricsRow> {
    config
        .methods
        .iter()
        .map(|&m| {
            let outcomes: Vec<&MethodOutcome> = records.iter().filter(|r| r.method == m).map(|r| &r.outcome).collect();
            summarize(config, prevalence, m, truth, &outcomes)
        })
        .collect()
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    run_scenario_with_progress(config, &mut |_, _| {})
}

pub fn run_scenario_with_progress(config: &ScenarioConfig, progress: &mut dyn FnMut(usize, usize)) -> Result<ScenarioResult> {
    let prep = prepare(config)?;
    let prev = prep.analysis_prevalence;
    let per_rep = for_replicates(config.replicates, progress, |rep| {
        let data = simulate_replicate(&prep.generator, config, rep as u64)?;
        Ok(config
            .methods
            .iter()
            .map(|&method| ReplicateRecord {
                replicate: rep,
                method,
                analysis_prevalence: prev,
                outcome: analyze(method, &data, prev, config.sidedness),
            })
            .collect::<Vec<_>>())
    })?;
    let records: Vec<ReplicateRecord> = per_rep.into_iter().flatten().collect();
    let rows = rows_for(config, prev, &prep.truth, &records);
    Ok(ScenarioResult { config: config.clone(), analysis_prevalence: prev, truth: prep.truth, records, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityResult {
    pub baseline: ScenarioResult,
    /// Per multiplier: the records and metrics at the misspecified
    /// prevalence.
    pub misspecified: Vec<(f64, Vec<ReplicateRecord>, Vec<MetricsRow>)>,
    pub comparisons: Vec<SensitivityRow>,
}

/// Analyzes each simulated dataset at the true analysis prevalence and at
/// every multiple of it, so the comparisons are paired.
pub fn sensitivity_run(config: &ScenarioConfig, multipliers: &[f64]) -> Result<SensitivityResult> {
    sensitivity_run_with_progress(config, multipliers, &mut |_, _| {})
}

pub fn sensitivity_run_with_progress(
    config: &ScenarioConfig,
    multipliers: &[f64],
    progress: &mut dyn FnMut(usize, usize),
) -> Result<SensitivityResult> {
    let prep = prepare(config)?;
    let prev = prep.analysis_prevalence;
    for &k in multipliers {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Config(format!("prevalence multiplier {k} is not positive")));
        }
        check_prevalence(prev * k)?;
    }
    let prevalences: Vec<f64> = std::iter::once(prev).chain(multipliers.iter().map(|k| prev * k)).collect();
    let per_rep = for_replicates(config.replicates, progress, |rep| {
        let data = simulate_replicate(&prep.generator, config, rep as u64)?;
        Ok(prevalences
            .iter()
            .map(|&pv| {
                config
                    .methods
                    .iter()
                    .map(|&method| ReplicateRecord {
                        replicate: rep,
                        method,
                        analysis_prevalence: pv,
                        outcome: analyze(method, &data, pv, config.sidedness),
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>())
    })?;

    let mut by_prevalence: Vec<Vec<ReplicateRecord>> = vec![Vec::new(); prevalences.len()];
    for rep in per_rep {
        for (slot, recs) in by_prevalence.iter_mut().zip(rep) {
            slot.extend(recs);
        }
    }
    let mut by_prevalence = by_prevalence.into_iter();
    let base_records = by_prevalence.next().expect("baseline present");
    let baseline = ScenarioResult {
        config: config.clone(),
        analysis_prevalence: prev,
        truth: prep.truth,
        rows: rows_for(config, prev, &prep.truth, &base_records),
        records: base_records,
    };
    let mut misspecified = Vec::new();
    let mut comparisons = Vec::new();
    for (&k, records) in multipliers.iter().zip(by_prevalence) {
        let rows = rows_for(config, prev * k, &prep.truth, &records);
        for &m in &config.methods {
            comparisons.extend(sensitivity_rows(config, m, k, prev * k, &prep.truth, &baseline.records, &records));
        }
        misspecified.push((k, records, rows));
    }
    Ok(SensitivityResult { baseline, misspecified, comparisons })
}
