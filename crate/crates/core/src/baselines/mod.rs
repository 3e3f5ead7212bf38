//! Comparison methods that model the mating-type distribution explicitly,
//! under mating symmetry: a log-linear likelihood for case-parent triads
//! (LL-LRT) and a pairs-only likelihood without imprinting (CLL-lite).

mod cll;
mod ll_lrt;

pub use cll::{cll_cell_probs, cll_drop_11, cll_fit, cll_test, CllVariant};
pub use ll_lrt::{ll_lrt_cell_probs, ll_lrt_fit, ll_lrt_test};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::likelihood::{chi_square_sf, one_sided_p, Hypothesis, ParamSet};
use crate::model::{MatingTypeDistribution, Param, RelativeRisks};
use crate::optim::{multistart, NelderMead};

/// Unordered parental genotype pairs, in parameter order.
pub const UNORDERED_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Mating-type probabilities under symmetry: one probability per unordered
/// pair, split evenly between the two orders when the genotypes differ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricMatingParams {
    probs: [f64; 6],
}

const LOGIT_BOUND: f64 = 30.0;

impl SymmetricMatingParams {
    pub fn new(probs: [f64; 6]) -> Result<Self> {
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidMating(format!("negative or non-finite entry in {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMating(format!("unordered pair probabilities sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64; 6] {
        &self.probs
    }

    /// Softmax with the (0,0) logit fixed at zero.
    pub fn from_logits(logits: &[f64]) -> Self {
        let mut z = [0.0; 6];
        z[1..].copy_from_slice(&logits[..5]);
        let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut probs = z.map(|v| (v - max).exp());
        let s: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= s);
        Self { probs }
    }

    pub fn to_logits(&self) -> [f64; 5] {
        let floor = (-LOGIT_BOUND + 1.0).exp();
        let base = self.probs[0].max(floor).ln();
        let mut out = [0.0; 5];
        for (o, p) in out.iter_mut().zip(&self.probs[1..]) {
            *o = (p.max(floor).ln() - base).clamp(-LOGIT_BOUND + 1.0, LOGIT_BOUND - 1.0);
        }
        out
    }

    /// The induced 3x3 table, `mu[m][f] = mu[f][m]`.
    pub fn table(&self) -> [[f64; 3]; 3] {
        let mut mu = [[0.0; 3]; 3];
        for (&(a, b), &p) in UNORDERED_PAIRS.iter().zip(&self.probs) {
            if a == b {
                mu[a][a] = p;
            } else {
                mu[a][b] = p / 2.0;
                mu[b][a] = p / 2.0;
            }
        }
        mu
    }

    pub fn mating_distribution(&self) -> Result<MatingTypeDistribution<f64>> {
        MatingTypeDistribution::new(self.table())
    }

    /// Random mating with genotype frequencies `g`.
    pub fn from_genotypes(g: [f64; 3]) -> Self {
        let mut probs = [0.0; 6];
        for (p, &(a, b)) in probs.iter_mut().zip(&UNORDERED_PAIRS) {
            *p = if a == b { g[a] * g[a] } else { 2.0 * g[a] * g[b] };
        }
        let s: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= s);
        Self { probs }
    }
}

pub(crate) fn unordered_index(m: usize, f: usize) -> usize {
    let (a, b) = if m <= f { (m, f) } else { (f, m) };
    UNORDERED_PAIRS.iter().position(|&p| p == (a, b)).expect("genotypes in range")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineFit {
    pub risks: RelativeRisks<f64>,
    /// Phenocopy rate implied by the supplied prevalence, when the method
    /// identifies one.
    pub delta: Option<f64>,
    pub mating: SymmetricMatingParams,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    pub free: ParamSet,
    pub at_boundary: Vec<Param>,
}

impl BaselineFit {
    pub fn get(&self, p: Param) -> Option<f64> {
        match p {
            Param::Delta => self.delta,
            _ => Some(self.risks.get(p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineTest {
    pub hypothesis: Hypothesis,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub full: BaselineFit,
    pub null: BaselineFit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineOptions {
    pub optimizer: NelderMead,
    pub starts: usize,
    pub risk_bound: f64,
}

impl Default for BaselineOptions {
    fn default() -> Self {
        Self { optimizer: NelderMead::default(), starts: 5, risk_bound: 1000.0 }
    }
}

/// Search space shared by the baselines: log relative risks of the free
/// risk parameters followed by five mating logits.
struct Layout {
    free: Vec<Param>,
    log_bound: f64,
}

impl Layout {
    fn unpack(&self, theta: &[f64]) -> Option<(RelativeRisks<f64>, SymmetricMatingParams)> {
        let k = self.free.len();
        if theta[..k].iter().any(|x| x.abs() > self.log_bound) || theta[k..].iter().any(|x| x.abs() > LOGIT_BOUND) {
            return None;
        }
        let mut risks = RelativeRisks::null();
        for (&p, &x) in self.free.iter().zip(theta) {
            risks.set(p, x.exp());
        }
        Some((risks, SymmetricMatingParams::from_logits(&theta[k..])))
    }

    fn pack(&self, risks: &RelativeRisks<f64>, mating: &SymmetricMatingParams) -> Vec<f64> {
        let mut theta: Vec<f64> = self.free.iter().map(|&p| risks.get(p).ln()).collect();
        theta.extend(mating.to_logits());
        theta
    }
}

const PERTURBATIONS: [(f64, f64); 4] = [(0.3, 0.3), (-0.3, -0.3), (0.5, -0.5), (-0.5, 0.5)];

/// Maximizes `loglik(risks, mating)` over the risk parameters outside
/// `fixed` and `pinned` and over the symmetric mating simplex. The returned
/// fit has no phenocopy rate.
pub(crate) fn maximize(
    loglik: impl Fn(&RelativeRisks<f64>, &SymmetricMatingParams) -> f64,
    fixed: ParamSet,
    pinned: ParamSet,
    mating_start: SymmetricMatingParams,
    extra_starts: &[(RelativeRisks<f64>, SymmetricMatingParams)],
    options: &BaselineOptions,
) -> Result<BaselineFit> {
    let free_set = ParamSet::of(&Param::RISKS).minus(pinned.union(fixed));
    let layout = Layout { free: free_set.iter().collect(), log_bound: options.risk_bound.ln() };
    let objective = |theta: &[f64]| match layout.unpack(theta) {
        Some((r, m)) => -loglik(&r, &m),
        None => f64::INFINITY,
    };

    let base = layout.pack(&RelativeRisks::null(), &mating_start);
    let k = layout.free.len();
    let mut starts = vec![base.clone()];
    for &(even, odd) in PERTURBATIONS.iter().take(options.starts.saturating_sub(1)) {
        let mut x = base.clone();
        for (i, v) in x[..k].iter_mut().enumerate() {
            *v = if i % 2 == 0 { even } else { odd };
        }
        starts.push(x);
    }
    let uniform = SymmetricMatingParams::new([1.0 / 6.0; 6]).expect("valid");
    starts.push(layout.pack(&RelativeRisks::null(), &uniform));
    for (r, m) in extra_starts {
        starts.push(layout.pack(r, m));
    }

    let best = multistart(&options.optimizer, objective, &starts)
        .filter(|m| m.value.is_finite())
        .ok_or_else(|| Error::DegenerateData("likelihood is not finite at any starting point".into()))?;
    let (risks, mating) = layout.unpack(&best.x).expect("optimum inside the box");
    let at_boundary = layout
        .free
        .iter()
        .zip(&best.x)
        .filter(|(_, x)| x.abs() >= layout.log_bound - 1e-3)
        .map(|(&p, _)| p)
        .collect();
    Ok(BaselineFit {
        risks,
        delta: None,
        mating,
        loglik: -best.value,
        converged: best.converged,
        iterations: best.iterations,
        evaluations: best.evaluations,
        free: free_set,
        at_boundary,
    })
}

pub(crate) fn assemble_test(hypothesis: Hypothesis, df: usize, full: &BaselineFit, null: BaselineFit) -> BaselineTest {
    let statistic = (2.0 * (full.loglik - null.loglik)).max(0.0);
    let p_two = chi_square_sf(statistic, df);
    let p_value = one_sided_p(p_two, full.risks.r_im, hypothesis.sidedness);
    BaselineTest { hypothesis, statistic, df, p_value, full: full.clone(), null }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_table() {
        let s = SymmetricMatingParams::new([0.1, 0.2, 0.1, 0.3, 0.2, 0.1]).unwrap();
        let mu = s.mating_distribution().unwrap();
        assert!(mu.is_symmetric(0.0));
        assert_eq!(mu.table()[0][1], 0.1);
        assert_eq!(mu.table()[1][1], 0.3);
        assert!(SymmetricMatingParams::new([0.5, 0.5, 0.1, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn logits_round_trip() {
        let s = SymmetricMatingParams::new([0.1, 0.2, 0.1, 0.3, 0.2, 0.1]).unwrap();
        let back = SymmetricMatingParams::from_logits(&s.to_logits());
        for (a, b) in back.probs().iter().zip(s.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn random_mating_matches_the_product() {
        let g = [0.49, 0.42, 0.09];
        let s = SymmetricMatingParams::from_genotypes(g);
        let mu = s.table();
        for m in 0..3 {
            for f in 0..3 {
                assert!((mu[m][f] - g[m] * g[f]).abs() < 1e-15);
            }
        }
        assert_eq!(unordered_index(2, 0), 2);
    }
}
