use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::fit::{fit_pinned, FitOptions, FitResult};
use super::{CountsTable, Hypothesis, ParamSet, Sidedness};
use crate::error::{Error, Result};
use crate::model::Param;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub hypothesis: Hypothesis,
    /// 2 (ll_full - ll_null), clamped at zero.
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub full: FitResult,
    pub null: FitResult,
}

impl TestResult {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(statistic: f64, df: usize) -> f64 {
    if df == 0 {
        return f64::NAN;
    }
    if statistic <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("df > 0");
    dist.sf(statistic).clamp(0.0, 1.0)
}

/// Halves the two-sided p-value when the estimate lies on the hypothesized
/// side of one, and reflects it otherwise.
pub fn one_sided_p(p_two: f64, estimate: f64, sidedness: Sidedness) -> f64 {
    let agrees = match sidedness {
        Sidedness::Two => return p_two,
        Sidedness::Greater => estimate > 1.0,
        Sidedness::Less => estimate < 1.0,
    };
    if agrees {
        p_two / 2.0
    } else {
        1.0 - p_two / 2.0
    }
}

/// Number of constraints a hypothesis adds on top of the base model.
pub fn degrees_of_freedom(hypothesis: &Hypothesis, options: &FitOptions) -> usize {
    hypothesis.pinned().minus(options.base_pinned()).len()
}

fn assemble(hypothesis: Hypothesis, df: usize, full: &FitResult, null: FitResult) -> TestResult {
    let statistic = (2.0 * (full.loglik - null.loglik)).max(0.0);
    let p_two = chi_square_sf(statistic, df);
    let p_value = one_sided_p(p_two, full.estimates.get(Param::Rim), hypothesis.sidedness);
    TestResult { hypothesis, statistic, df, p_value, full: full.clone(), null }
}

fn check_df(hypothesis: &Hypothesis, options: &FitOptions) -> Result<usize> {
    let df = degrees_of_freedom(hypothesis, options);
    if df == 0 {
        return Err(Error::Contract(format!(
            "the {} hypothesis constrains nothing when R_im is already fixed",
            hypothesis.kind
        )));
    }
    Ok(df)
}

/// Likelihood ratio test of one hypothesis.
pub fn lrt(counts: &CountsTable, prevalence: f64, hypothesis: &Hypothesis, options: &FitOptions) -> Result<TestResult> {
    Ok(test_hypotheses(counts, prevalence, std::slice::from_ref(hypothesis), options)?.remove(0))
}

/// Tests several hypotheses against one full-model fit. The null fits come
/// first and seed the full fit, so the full log-likelihood is never below any
/// null log-likelihood.
pub fn test_hypotheses(
    counts: &CountsTable,
    prevalence: f64,
    hypotheses: &[Hypothesis],
    options: &FitOptions,
) -> Result<Vec<TestResult>> {
    let dfs = hypotheses.iter().map(|h| check_df(h, options)).collect::<Result<Vec<_>>>()?;
    let nulls = hypotheses
        .iter()
        .map(|h| fit_pinned(counts, prevalence, h.pinned(), options, &[]))
        .collect::<Result<Vec<_>>>()?;
    let seeds: Vec<_> = nulls.iter().map(|n| n.estimates).collect();
    let full = fit_pinned(counts, prevalence, ParamSet::EMPTY, options, &seeds)?;
    Ok(hypotheses
        .iter()
        .zip(dfs)
        .zip(nulls)
        .map(|((h, df), null)| assemble(*h, df, &full, null))
        .collect())
}
