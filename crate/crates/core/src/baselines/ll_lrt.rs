//! Case-parent triads only. Cell probabilities are proportional to
//! mu_mf * transmission * relative-risk product; the phenocopy rate cancels
//! in the normalization, so it is not estimated.

use super::{assemble_test, maximize, unordered_index, BaselineFit, BaselineOptions, BaselineTest, SymmetricMatingParams};
use crate::error::{Error, Result};
use crate::likelihood::{Hypothesis, HypothesisKind, ParamSet};
use crate::model::{transmission_prob, RelativeRisks, TRIAD_TYPES};
use crate::scalar::xlogy;

/// Multinomial cell probabilities of the 15 case-triad types.
pub fn ll_lrt_cell_probs(risks: &RelativeRisks<f64>, mating: &SymmetricMatingParams) -> [f64; 15] {
    let mu = mating.table();
    let mut w = [0.0; 15];
    for (wi, t) in w.iter_mut().zip(TRIAD_TYPES.iter()) {
        *wi = mu[t.m.index()][t.f.index()] * transmission_prob::<f64>(t.m, t.f, t.c) * risks.triad_product(t);
    }
    let s: f64 = w.iter().sum();
    w.map(|v| v / s)
}

fn loglik(counts: &[u64; 15], risks: &RelativeRisks<f64>, mating: &SymmetricMatingParams) -> f64 {
    let probs = ll_lrt_cell_probs(risks, mating);
    counts.iter().zip(&probs).map(|(&n, &p)| xlogy(n as f64, p)).sum()
}

/// Parental pair frequencies seen in the triads, lightly smoothed.
fn mating_start(counts: &[u64; 15]) -> SymmetricMatingParams {
    let mut probs = [0.5; 6];
    for (t, &n) in TRIAD_TYPES.iter().zip(counts) {
        probs[unordered_index(t.m.index(), t.f.index())] += n as f64;
    }
    let s: f64 = probs.iter().sum();
    SymmetricMatingParams::new(probs.map(|p| p / s)).unwrap_or_else(|_| SymmetricMatingParams::from_genotypes([1.0; 3]))
}

fn check(counts: &[u64; 15]) -> Result<()> {
    if counts.iter().sum::<u64>() == 0 {
        return Err(Error::DegenerateData("LL-LRT needs at least one case-parent triad".into()));
    }
    Ok(())
}

fn fit_pinned(counts: &[u64; 15], pinned: ParamSet, seeds: &[BaselineFit], options: &BaselineOptions) -> Result<BaselineFit> {
    let extra: Vec<_> = seeds.iter().map(|s| (s.risks, s.mating)).collect();
    maximize(|r, m| loglik(counts, r, m), ParamSet::EMPTY, pinned, mating_start(counts), &extra, options)
}

/// Maximum-likelihood fit from case-triad counts; `hypothesis` pins its
/// parameters at one.
pub fn ll_lrt_fit(counts: &[u64; 15], hypothesis: Option<&Hypothesis>, options: &BaselineOptions) -> Result<BaselineFit> {
    check(counts)?;
    fit_pinned(counts, hypothesis.map(|h| h.pinned()).unwrap_or_default(), &[], options)
}

/// Likelihood ratio tests against one full fit seeded by the null fits.
pub fn ll_lrt_test(counts: &[u64; 15], hypotheses: &[Hypothesis], options: &BaselineOptions) -> Result<Vec<BaselineTest>> {
    check(counts)?;
    let nulls = hypotheses
        .iter()
        .map(|h| fit_pinned(counts, h.pinned(), &[], options))
        .collect::<Result<Vec<_>>>()?;
    let full = fit_pinned(counts, ParamSet::EMPTY, &nulls, options)?;
    Ok(hypotheses
        .iter()
        .zip(nulls)
        .map(|(h, null)| assemble_test(*h, df(h.kind), &full, null))
        .collect())
}

fn df(kind: HypothesisKind) -> usize {
    kind.pinned().len()
}
