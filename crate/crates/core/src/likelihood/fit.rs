use serde::Serialize;

use super::partial::{excluded_cells, is_informative, loglik_unchecked};
use super::{CountsTable, Hypothesis, ParamSet};
use crate::error::{Error, Result};
use crate::model::{GenotypeScore, Origin, Param, RiskParameters, PENETRANCE_CELLS};
use crate::optim::{multistart, NelderMead};

/// Settings for maximizing the partial likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Number of deterministic starting points (the null point first).
    pub starts: usize,
    pub optimizer: NelderMead,
    /// Fix R_im = 1 in the full model, as when only mother-child pairs are
    /// analyzed.
    pub pin_imprinting: bool,
    /// Relative risks are searched within `[1/bound, bound]`.
    pub risk_bound: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { starts: 5, optimizer: NelderMead::default(), pin_imprinting: false, risk_bound: 1000.0 }
    }
}

impl FitOptions {
    pub fn pair_only() -> Self {
        Self { pin_imprinting: true, ..Self::default() }
    }

    /// Parameters pinned at one in the full model.
    pub fn base_pinned(&self) -> ParamSet {
        if self.pin_imprinting {
            ParamSet::of(&[Param::Rim])
        } else {
            ParamSet::EMPTY
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub estimates: RiskParameters<f64>,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    /// Parameters estimated (the rest are pinned at one).
    pub free: ParamSet,
    /// Free parameters whose estimate sits on the search box or on the
    /// penetrance < 1 feasibility boundary.
    pub at_boundary: Vec<Param>,
    pub excluded_cells: Vec<String>,
}

const LOGIT_BOUND: f64 = 30.0;
const BOUNDARY_SLACK: f64 = 1e-3;
const PENETRANCE_SLACK: f64 = 1e-6;

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn expit(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Maps between the free parameters and the unconstrained search space
/// (logit delta, log relative risks).
struct Transform {
    free: Vec<Param>,
    log_bound: f64,
}

impl Transform {
    fn to_values(&self, theta: &[f64]) -> [f64; 6] {
        let mut values = [1.0; 6];
        for (&p, &x) in self.free.iter().zip(theta) {
            values[p.index()] = if p == Param::Delta { expit(x) } else { x.exp() };
        }
        values
    }

    fn to_theta(&self, params: &RiskParameters<f64>) -> Vec<f64> {
        self.free
            .iter()
            .map(|&p| if p == Param::Delta { logit(params.delta()) } else { params.get(p).ln() })
            .collect()
    }

    fn in_box(&self, theta: &[f64]) -> bool {
        self.free.iter().zip(theta).all(|(&p, &x)| {
            let b = if p == Param::Delta { LOGIT_BOUND } else { self.log_bound };
            x.abs() <= b
        })
    }

    fn params(&self, theta: &[f64]) -> Option<RiskParameters<f64>> {
        if !self.in_box(theta) {
            return None;
        }
        RiskParameters::from_array(self.to_values(theta)).ok()
    }
}

/// Deterministic perturbation patterns applied to the null point.
const PERTURBATIONS: [(f64, f64, f64); 4] = [
    // (delta offset, risk offset on even positions, risk offset on odd positions)
    (-0.3, 0.3, 0.3),
    (0.3, -0.3, -0.3),
    (0.0, 0.5, -0.5),
    (0.0, -0.5, 0.5),
];

fn starting_points(transform: &Transform, prevalence: f64, n: usize, extra: &[RiskParameters<f64>]) -> Vec<Vec<f64>> {
    let base: Vec<f64> = transform
        .free
        .iter()
        .map(|&p| if p == Param::Delta { logit(prevalence) } else { 0.0 })
        .collect();
    let mut starts = vec![base.clone()];
    for &(d, even, odd) in PERTURBATIONS.iter().take(n.saturating_sub(1)) {
        let mut offset: Vec<f64> = Vec::with_capacity(base.len());
        let mut k = 0;
        for &p in &transform.free {
            if p == Param::Delta {
                offset.push(d);
            } else {
                offset.push(if k % 2 == 0 { even } else { odd });
                k += 1;
            }
        }
        let mut scale = 1.0;
        for _ in 0..30 {
            let x: Vec<f64> = base.iter().zip(&offset).map(|(b, o)| b + scale * o).collect();
            if transform.params(&x).is_some() {
                starts.push(x);
                break;
            }
            scale *= 0.5;
        }
    }
    for params in extra {
        let x = transform.to_theta(params);
        if transform.params(&x).is_some() {
            starts.push(x);
        }
    }
    starts
}

fn boundary_params(transform: &Transform, theta: &[f64], estimates: &RiskParameters<f64>) -> Vec<Param> {
    let mut flagged = ParamSet::EMPTY;
    for (&p, &x) in transform.free.iter().zip(theta) {
        let b = if p == Param::Delta { LOGIT_BOUND } else { transform.log_bound };
        if x.abs() >= b - BOUNDARY_SLACK {
            flagged.insert(p);
        }
    }
    let free = ParamSet::of(&transform.free);
    for (m, c, origin) in PENETRANCE_CELLS {
        let (m, c) = (GenotypeScore::new(m).unwrap(), GenotypeScore::new(c).unwrap());
        let pen = estimates.delta() * estimates.risks().product(m, c, origin);
        if pen < 1.0 - PENETRANCE_SLACK {
            continue;
        }
        let mut involved = vec![Param::Delta];
        match c.value() {
            1 => {
                involved.push(Param::R1);
                if origin == Some(Origin::Maternal) {
                    involved.push(Param::Rim);
                }
            }
            2 => involved.push(Param::R2),
            _ => {}
        }
        match m.value() {
            1 => involved.push(Param::S1),
            2 => involved.push(Param::S2),
            _ => {}
        }
        for p in involved {
            if free.contains(p) {
                flagged.insert(p);
            }
        }
    }
    flagged.iter().collect()
}

fn validate_prevalence(prevalence: f64) -> Result<()> {
    if prevalence > 0.0 && prevalence < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "prevalence",
            value: prevalence,
            reason: "prevalence must lie in (0, 1)",
        })
    }
}

/// Maximizes the partial likelihood, pinning the parameters constrained by
/// `hypothesis` (and R_im when `options.pin_imprinting`).
pub fn fit(
    counts: &CountsTable,
    prevalence: f64,
    hypothesis: Option<&Hypothesis>,
    options: &FitOptions,
) -> Result<FitResult> {
    let pinned = hypothesis.map(|h| h.pinned()).unwrap_or_default();
    fit_pinned(counts, prevalence, pinned, options, &[])
}

/// Like [`fit`], with an explicit pinned set and extra starting points.
pub fn fit_pinned(
    counts: &CountsTable,
    prevalence: f64,
    pinned: ParamSet,
    options: &FitOptions,
    extra_starts: &[RiskParameters<f64>],
) -> Result<FitResult> {
    validate_prevalence(prevalence)?;
    if !is_informative(counts) {
        return Err(Error::DegenerateData(format!(
            "no family structure has both cases and controls in an informative cell \
             (triads {}/{}, pairs {}/{}; uninformative cells: {})",
            counts.triad_cases(),
            counts.triad_controls(),
            counts.pair_cases(),
            counts.pair_controls(),
            excluded_cells(counts).join(" ")
        )));
    }
    let pinned = pinned.union(options.base_pinned());
    let transform = Transform {
        free: ParamSet::ALL.minus(pinned).iter().collect(),
        log_bound: options.risk_bound.ln(),
    };
    let objective = |theta: &[f64]| match transform.params(theta) {
        Some(params) => -loglik_unchecked(&params, counts, prevalence),
        None => f64::INFINITY,
    };
    let starts = starting_points(&transform, prevalence, options.starts.max(1), extra_starts);
    let best = multistart(&options.optimizer, objective, &starts)
        .filter(|m| m.value.is_finite())
        .ok_or_else(|| Error::DegenerateData("no feasible starting point".into()))?;
    let estimates = transform.params(&best.x).expect("optimum is feasible");
    Ok(FitResult {
        at_boundary: boundary_params(&transform, &best.x, &estimates),
        estimates,
        loglik: -best.value,
        converged: best.converged,
        iterations: best.iterations,
        evaluations: best.evaluations,
        free: ParamSet::of(&transform.free),
        excluded_cells: excluded_cells(counts),
    })
}
