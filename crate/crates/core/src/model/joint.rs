use serde::Serialize;

use super::{
    transmission_prob, triad_penetrance, MatingTypeDistribution, PairType, RelativeRisks,
    RiskParameters, Status, TriadType, PAIR_TYPES, TRIAD_TYPES,
};
use crate::error::Result;
use crate::scalar::Scalar;

/// P(D = d, M = m, F = f, C = c) for one triad type.
///
/// The (1,1,1) type carries the equal-weight average of its two possible
/// origins, which makes its control entry `mu11 / 4 * [2 - delta S1 R1 (1 + Rim)]`.
pub fn triad_joint_probability<T: Scalar>(
    params: &RiskParameters<T>,
    mu: &MatingTypeDistribution<T>,
    t: &TriadType,
    d: Status,
) -> T {
    let weight = mu.get(t.m, t.f) * transmission_prob::<T>(t.m, t.f, t.c);
    let pen = triad_penetrance(params, t);
    match d {
        Status::Case => weight * pen,
        Status::Control => weight * (T::one() - pen),
    }
}

/// P(D = d, M = m, C = c), summed over the pair's constituent triad types.
pub fn pair_joint_probability<T: Scalar>(
    params: &RiskParameters<T>,
    mu: &MatingTypeDistribution<T>,
    p: &PairType,
    d: Status,
) -> T {
    p.constituent_triads
        .iter()
        .map(|&i| triad_joint_probability(params, mu, &TRIAD_TYPES[i - 1], d))
        .fold(T::zero(), |a, b| a + b)
}

/// All 30 triad and 14 pair joint probabilities for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointProbabilityTable<T = f64> {
    pub triad_case: [T; 15],
    pub triad_control: [T; 15],
    pub pair_case: [T; 7],
    pub pair_control: [T; 7],
}

impl<T: Scalar> JointProbabilityTable<T> {
    pub fn compute(params: &RiskParameters<T>, mu: &MatingTypeDistribution<T>) -> Self {
        let triad_case = TRIAD_TYPES.map(|t| triad_joint_probability(params, mu, &t, Status::Case));
        let triad_control = TRIAD_TYPES.map(|t| triad_joint_probability(params, mu, &t, Status::Control));
        let collapse = |src: &[T; 15]| {
            PAIR_TYPES.map(|p| {
                p.constituent_triads
                    .iter()
                    .fold(T::zero(), |acc, &i| acc + src[i - 1])
            })
        };
        let pair_case = collapse(&triad_case);
        let pair_control = collapse(&triad_control);
        Self { triad_case, triad_control, pair_case, pair_control }
    }

    /// P(D = 1) implied by the table.
    pub fn prevalence(&self) -> T {
        self.triad_case.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn total(&self) -> T {
        self.prevalence() + self.triad_control.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// P(M, F, C | D) over the 15 triad types.
    pub fn triad_conditional(&self, d: Status) -> [T; 15] {
        let prev = self.prevalence();
        match d {
            Status::Case => self.triad_case.map(|v| v / prev),
            Status::Control => self.triad_control.map(|v| v / (T::one() - prev)),
        }
    }

    /// P(M, C | D) over the 7 pair types.
    pub fn pair_conditional(&self, d: Status) -> [T; 7] {
        let prev = self.prevalence();
        match d {
            Status::Case => self.pair_case.map(|v| v / prev),
            Status::Control => self.pair_control.map(|v| v / (T::one() - prev)),
        }
    }
}

/// Sum over triad types of mu * transmission * relative-risk product, i.e.
/// P(D = 1) / delta.
pub fn risk_weighted_mass<T: Scalar>(risks: &RelativeRisks<T>, mu: &MatingTypeDistribution<T>) -> T {
    TRIAD_TYPES.iter().fold(T::zero(), |acc, t| {
        acc + mu.get(t.m, t.f) * transmission_prob::<T>(t.m, t.f, t.c) * risks.triad_product(t)
    })
}

/// Phenocopy rate that makes the model prevalence equal `prevalence`.
pub fn solve_phenocopy<T: Scalar>(
    risks: &RelativeRisks<T>,
    mu: &MatingTypeDistribution<T>,
    prevalence: T,
) -> Result<RiskParameters<T>> {
    if !(prevalence > T::zero() && prevalence < T::one()) {
        return Err(crate::Error::InvalidParameter {
            name: "prevalence",
            value: prevalence.to_f64().unwrap_or(f64::NAN),
            reason: "prevalence must lie in (0, 1)",
        });
    }
    risks.validate()?;
    let delta = prevalence / risk_weighted_mass(risks, mu);
    RiskParameters::new(delta, *risks)
}
