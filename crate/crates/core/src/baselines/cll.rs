//! Mother-child pairs without imprinting (R_im = 1). Case pairs follow
//! P(M,C) * rr(M,C) normalized; control pairs are taken to follow P(M,C)
//! itself, the rare-disease approximation. P(M,C) comes from a symmetric
//! mating distribution. The phenocopy rate is not part of the likelihood; it
//! is derived afterwards from the supplied prevalence.

use super::{assemble_test, maximize, BaselineFit, BaselineOptions, BaselineTest, SymmetricMatingParams};
use crate::error::{Error, Result};
use crate::likelihood::{CountsTable, Hypothesis, HypothesisKind, ParamSet};
use crate::model::{transmission_prob, GenotypeScore, Param, RelativeRisks, EXCLUDED_PAIR, PAIR_TYPES};
use crate::scalar::xlogy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CllVariant {
    /// All seven pair types.
    Full,
    /// The (1,1) pair removed from both multinomials.
    Drop11,
}

impl CllVariant {
    fn includes(self, cell: usize) -> bool {
        self == CllVariant::Full || cell != EXCLUDED_PAIR
    }
}

fn pair_mass(mating: &SymmetricMatingParams) -> [f64; 7] {
    let mu = mating.table();
    let mut out = [0.0; 7];
    for (o, p) in out.iter_mut().zip(PAIR_TYPES.iter()) {
        *o = GenotypeScore::ALL
            .iter()
            .map(|&f| mu[p.m.index()][f.index()] * transmission_prob::<f64>(p.m, f, p.c))
            .sum();
    }
    out
}

fn pair_risk(risks: &RelativeRisks<f64>, m: GenotypeScore, c: GenotypeScore) -> f64 {
    let rc = [1.0, risks.r1, risks.r2][c.index()];
    let sm = [1.0, risks.s1, risks.s2][m.index()];
    rc * sm
}

/// Case and control cell probabilities over the seven pair types. Cells
/// outside the variant are zero.
pub fn cll_cell_probs(risks: &RelativeRisks<f64>, mating: &SymmetricMatingParams, variant: CllVariant) -> ([f64; 7], [f64; 7]) {
    let mass = pair_mass(mating);
    let mut case = [0.0; 7];
    let mut control = [0.0; 7];
    for (i, p) in PAIR_TYPES.iter().enumerate() {
        if variant.includes(i) {
            case[i] = mass[i] * pair_risk(risks, p.m, p.c);
            control[i] = mass[i];
        }
    }
    let (sc, s0): (f64, f64) = (case.iter().sum(), control.iter().sum());
    (case.map(|v| v / sc), control.map(|v| v / s0))
}

fn loglik(counts: &CountsTable, variant: CllVariant, risks: &RelativeRisks<f64>, mating: &SymmetricMatingParams) -> f64 {
    let (case, control) = cll_cell_probs(risks, mating, variant);
    (0..7)
        .filter(|&i| variant.includes(i))
        .map(|i| xlogy(counts.n1_pair[i] as f64, case[i]) + xlogy(counts.n0_pair[i] as f64, control[i]))
        .sum()
}

/// Random mating at the allele frequency of the observed mothers.
fn mating_start(counts: &CountsTable, variant: CllVariant) -> SymmetricMatingParams {
    let mut g = [0.5; 3];
    for (i, p) in PAIR_TYPES.iter().enumerate().filter(|&(i, _)| variant.includes(i)) {
        g[p.m.index()] += (counts.n1_pair[i] + counts.n0_pair[i]) as f64;
    }
    let q = ((g[1] + 2.0 * g[2]) / (2.0 * g.iter().sum::<f64>())).clamp(0.01, 0.99);
    SymmetricMatingParams::from_genotypes([(1.0 - q) * (1.0 - q), 2.0 * q * (1.0 - q), q * q])
}

fn check(counts: &CountsTable, variant: CllVariant) -> Result<()> {
    if counts.triad_cases() + counts.triad_controls() > 0 {
        return Err(Error::Contract("CLL-lite takes mother-child pairs only; collapse triads first".into()));
    }
    let used = |n: &[u64; 7]| (0..7).filter(|&i| variant.includes(i)).map(|i| n[i]).sum::<u64>();
    if used(&counts.n1_pair) == 0 || used(&counts.n0_pair) == 0 {
        return Err(Error::DegenerateData("CLL-lite needs both case and control pairs".into()));
    }
    Ok(())
}

fn check_hypothesis(h: &Hypothesis) -> Result<()> {
    if h.kind == HypothesisKind::Imprinting {
        return Err(Error::Contract("CLL-lite fixes R_im = 1 and cannot test imprinting".into()));
    }
    Ok(())
}

fn fit_pinned(
    counts: &CountsTable,
    variant: CllVariant,
    prevalence: f64,
    pinned: ParamSet,
    seeds: &[BaselineFit],
    options: &BaselineOptions,
) -> Result<BaselineFit> {
    let extra: Vec<_> = seeds.iter().map(|s| (s.risks, s.mating)).collect();
    let fixed = ParamSet::of(&[Param::Rim]);
    let mut fit = maximize(
        |r, m| loglik(counts, variant, r, m),
        fixed,
        pinned,
        mating_start(counts, variant),
        &extra,
        options,
    )?;
    let mass: f64 = pair_mass(&fit.mating)
        .iter()
        .zip(PAIR_TYPES.iter())
        .map(|(w, p)| w * pair_risk(&fit.risks, p.m, p.c))
        .sum();
    fit.delta = Some(prevalence / mass);
    Ok(fit)
}

fn validate_prevalence(prevalence: f64) -> Result<()> {
    if prevalence > 0.0 && prevalence < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "prevalence", value: prevalence, reason: "must lie in (0, 1)" })
    }
}

fn fit_variant(
    counts: &CountsTable,
    prevalence: f64,
    hypothesis: Option<&Hypothesis>,
    variant: CllVariant,
    options: &BaselineOptions,
) -> Result<BaselineFit> {
    validate_prevalence(prevalence)?;
    check(counts, variant)?;
    if let Some(h) = hypothesis {
        check_hypothesis(h)?;
    }
    fit_pinned(counts, variant, prevalence, hypothesis.map(|h| h.pinned()).unwrap_or_default(), &[], options)
}

/// CLL-lite fit on pairs-only counts.
pub fn cll_fit(counts: &CountsTable, prevalence: f64, hypothesis: Option<&Hypothesis>, options: &BaselineOptions) -> Result<BaselineFit> {
    fit_variant(counts, prevalence, hypothesis, CllVariant::Full, options)
}

/// CLL-lite without the (1,1) pair type.
pub fn cll_drop_11(counts: &CountsTable, prevalence: f64, hypothesis: Option<&Hypothesis>, options: &BaselineOptions) -> Result<BaselineFit> {
    fit_variant(counts, prevalence, hypothesis, CllVariant::Drop11, options)
}

/// Likelihood ratio tests for association (4 df) and maternal effects (2 df).
pub fn cll_test(
    counts: &CountsTable,
    prevalence: f64,
    hypotheses: &[Hypothesis],
    variant: CllVariant,
    options: &BaselineOptions,
) -> Result<Vec<BaselineTest>> {
    validate_prevalence(prevalence)?;
    check(counts, variant)?;
    hypotheses.iter().try_for_each(check_hypothesis)?;
    let nulls = hypotheses
        .iter()
        .map(|h| fit_pinned(counts, variant, prevalence, h.pinned(), &[], options))
        .collect::<Result<Vec<_>>>()?;
    let full = fit_pinned(counts, variant, prevalence, ParamSet::EMPTY, &nulls, options)?;
    Ok(hypotheses
        .iter()
        .zip(nulls)
        .map(|(h, null)| {
            let df = h.pinned().minus(ParamSet::of(&[Param::Rim])).len();
            assemble_test(*h, df, &full, null)
        })
        .collect())
}
