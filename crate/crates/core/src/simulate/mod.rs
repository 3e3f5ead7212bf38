//! Family data simulation: parental genotypes per sex, Mendelian children with
//! allele-origin bookkeeping, Bernoulli disease status, quota ascertainment
//! and father masking.

mod dataset;
mod population;

pub use dataset::{parse_dataset_csv, write_dataset_csv};
pub use population::{genotype_distribution, mixture_population, PopulationComponent, PopulationModel};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::likelihood::CountsTable;
use crate::model::{
    pair_type_of, penetrance, risk_weighted_mass, solve_phenocopy, triad_type_of, GenotypeScore,
    MatingTypeDistribution, Origin, RelativeRisks, RiskParameters, Status,
};

/// One nuclear family. `origin` is known only to the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyRecord {
    pub id: u64,
    pub m: GenotypeScore,
    pub f: Option<GenotypeScore>,
    pub c: GenotypeScore,
    pub d: Status,
    pub origin: Option<Origin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscertainmentSpec {
    pub target_cases: u64,
    pub target_controls: u64,
    pub missing_father_prob: f64,
}

impl Default for AscertainmentSpec {
    fn default() -> Self {
        Self { target_cases: 150, target_controls: 150, missing_father_prob: 0.5 }
    }
}

impl AscertainmentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.target_cases == 0 || self.target_controls == 0 {
            return Err(Error::Config("case and control targets must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.missing_father_prob) {
            return Err(Error::Config(format!(
                "missing_father_prob = {} is not a probability",
                self.missing_father_prob
            )));
        }
        Ok(())
    }
}

struct Component {
    maternal: WeightedIndex<f64>,
    paternal: WeightedIndex<f64>,
    params: RiskParameters<f64>,
    prevalence: f64,
}

/// Samples families from a population under fixed risk parameters.
pub struct FamilyGenerator {
    choose: Option<WeightedIndex<f64>>,
    weights: Vec<f64>,
    components: Vec<Component>,
}

impl FamilyGenerator {
    /// One phenocopy rate per component, solved from the component's own
    /// prevalence (or `prevalence` when the component has none).
    pub fn solve(pop: &PopulationModel, risks: &RelativeRisks<f64>, prevalence: f64) -> Result<Self> {
        Self::build(pop, |comp, mu| {
            solve_phenocopy(risks, mu, comp.prevalence.unwrap_or(prevalence))
        })
    }

    /// The same parameters in every component.
    pub fn with_params(pop: &PopulationModel, params: &RiskParameters<f64>) -> Result<Self> {
        Self::build(pop, |_, _| Ok(*params))
    }

    fn build(
        pop: &PopulationModel,
        mut params_for: impl FnMut(&PopulationComponent, &MatingTypeDistribution<f64>) -> Result<RiskParameters<f64>>,
    ) -> Result<Self> {
        pop.validate()?;
        let mut components = Vec::with_capacity(pop.components().len());
        for comp in pop.components() {
            let (female, male) = comp.parent_distributions()?;
            let mu = MatingTypeDistribution::from_parents(female, male)?;
            let params = params_for(comp, &mu)?;
            let prevalence = params.delta() * risk_weighted_mass(params.risks(), &mu);
            if !(prevalence > 0.0 && prevalence < 1.0) {
                return Err(Error::Config(format!("implied prevalence {prevalence} makes a quota unreachable")));
            }
            components.push(Component {
                maternal: WeightedIndex::new(female).map_err(|e| Error::Config(e.to_string()))?,
                paternal: WeightedIndex::new(male).map_err(|e| Error::Config(e.to_string()))?,
                params,
                prevalence,
            });
        }
        let weights: Vec<f64> = pop.components().iter().map(|c| c.weight).collect();
        let choose = if weights.len() > 1 {
            Some(WeightedIndex::new(&weights).map_err(|e| Error::Config(e.to_string()))?)
        } else {
            None
        };
        Ok(Self { choose, weights, components })
    }

    /// Population prevalence, the weighted mean of component prevalences.
    pub fn prevalence(&self) -> f64 {
        self.weights.iter().zip(&self.components).map(|(w, c)| w * c.prevalence).sum()
    }

    /// Risk parameters of each component (they differ only in delta).
    pub fn component_params(&self) -> Vec<RiskParameters<f64>> {
        self.components.iter().map(|c| c.params).collect()
    }

    pub fn sample_family<R: Rng + ?Sized>(&self, id: u64, rng: &mut R) -> FamilyRecord {
        let comp = match &self.choose {
            Some(w) => &self.components[w.sample(rng)],
            None => &self.components[0],
        };
        let m = comp.maternal.sample(rng) as u8;
        let f = comp.paternal.sample(rng) as u8;
        let from_mother = transmit(m, rng);
        let from_father = transmit(f, rng);
        let c = from_mother + from_father;
        let origin = match (c, from_mother) {
            (1, 1) => Some(Origin::Maternal),
            (1, _) => Some(Origin::Paternal),
            _ => None,
        };
        let (m, f, c) = (score(m), score(f), score(c));
        let pen = penetrance(&comp.params, m, c, origin).expect("feasible parameters");
        let d = Status::from_affected(rng.random_bool(pen));
        FamilyRecord { id, m, f: Some(f), c, d, origin }
    }
}

fn score(v: u8) -> GenotypeScore {
    GenotypeScore::new(v).expect("genotype in range")
}

/// Number of variant alleles (0 or 1) a parent with genotype `g` passes on.
fn transmit<R: Rng + ?Sized>(g: u8, rng: &mut R) -> u8 {
    match g {
        0 => 0,
        2 => 1,
        _ => rng.random_bool(0.5) as u8,
    }
}

/// Draws families until both quotas are filled, discarding the surplus.
/// Fathers are all present.
pub fn ascertain_complete<R: Rng + ?Sized>(
    generator: &FamilyGenerator,
    spec: &AscertainmentSpec,
    rng: &mut R,
) -> Result<Vec<FamilyRecord>> {
    spec.validate()?;
    let total = (spec.target_cases + spec.target_controls) as usize;
    let mut out = Vec::with_capacity(total);
    let (mut cases, mut controls) = (0, 0);
    while cases < spec.target_cases || controls < spec.target_controls {
        let fam = generator.sample_family(out.len() as u64 + 1, rng);
        let keep = match fam.d {
            Status::Case if cases < spec.target_cases => {
                cases += 1;
                true
            }
            Status::Control if controls < spec.target_controls => {
                controls += 1;
                true
            }
            _ => false,
        };
        if keep {
            out.push(fam);
        }
    }
    Ok(out)
}

/// Masks each father independently. One uniform draw per family regardless
/// of the probability, so the stream position does not depend on it.
pub fn mask_fathers<R: Rng + ?Sized>(records: &mut [FamilyRecord], prob: f64, rng: &mut R) {
    for r in records {
        let u: f64 = rng.random();
        if u < prob {
            r.f = None;
        }
    }
}

/// Ascertainment followed by father masking.
pub fn ascertain<R: Rng + ?Sized>(
    generator: &FamilyGenerator,
    spec: &AscertainmentSpec,
    rng: &mut R,
) -> Result<Vec<FamilyRecord>> {
    let mut records = ascertain_complete(generator, spec, rng)?;
    mask_fathers(&mut records, spec.missing_father_prob, rng);
    Ok(records)
}

/// Counts families by type; records with a father become triads, the rest
/// mother-child pairs.
pub fn tabulate(records: &[FamilyRecord]) -> Result<CountsTable> {
    let mut counts = CountsTable::empty();
    for r in records {
        match r.f {
            Some(f) => {
                let t = triad_type_of(r.m, f, r.c).ok_or_else(|| Error::Data {
                    id: r.id,
                    reason: format!("child {} cannot descend from mother {} and father {}", r.c, r.m, f),
                })?;
                counts.add_triad(t, r.d);
            }
            None => {
                let p = pair_type_of(r.m, r.c).ok_or_else(|| Error::Data {
                    id: r.id,
                    reason: format!("child {} cannot descend from mother {}", r.c, r.m),
                })?;
                counts.add_pair(p, r.d);
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setting2() -> RelativeRisks<f64> {
        RelativeRisks::new(2.0, 3.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn quotas_and_masking() {
        let g = FamilyGenerator::solve(&PopulationModel::hwe(0.3), &setting2(), 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = AscertainmentSpec { target_cases: 40, target_controls: 60, missing_father_prob: 0.0 };
        let counts = tabulate(&ascertain(&g, &spec, &mut rng).unwrap()).unwrap();
        assert_eq!((counts.triad_cases(), counts.triad_controls()), (40, 60));
        assert_eq!(counts.pair_cases() + counts.pair_controls(), 0);

        let spec = AscertainmentSpec { missing_father_prob: 1.0, ..spec };
        let counts = tabulate(&ascertain(&g, &spec, &mut rng).unwrap()).unwrap();
        assert_eq!((counts.pair_cases(), counts.pair_controls()), (40, 60));
    }

    #[test]
    fn origins_are_consistent() {
        let g = FamilyGenerator::solve(&PopulationModel::hwe(0.5), &setting2(), 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..5000 {
            let r = g.sample_family(i, &mut rng);
            let f = r.f.unwrap();
            assert!(triad_type_of(r.m, f, r.c).is_some());
            assert_eq!(r.origin.is_some(), r.c == GenotypeScore::ONE);
            if let Some(o) = crate::model::determined_origin(r.m, f) {
                if r.c == GenotypeScore::ONE {
                    assert_eq!(r.origin, Some(o));
                }
            }
        }
    }

    #[test]
    fn reproducible() {
        let g = FamilyGenerator::solve(&PopulationModel::inbred(0.3, 0.1, 0.3), &setting2(), 0.05).unwrap();
        let spec = AscertainmentSpec::default();
        let a = ascertain(&g, &spec, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = ascertain(&g, &spec, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn incompatible_record_is_reported() {
        let r = FamilyRecord {
            id: 42,
            m: GenotypeScore::ZERO,
            f: None,
            c: GenotypeScore::TWO,
            d: Status::Case,
            origin: None,
        };
        assert_eq!(tabulate(&[r]).unwrap_err(), Error::Data { id: 42, reason: "child 2 cannot descend from mother 0".into() });
        assert!(tabulate(&[]).unwrap().is_empty());
    }

    #[test]
    fn per_component_delta() {
        let pop = mixture_population(vec![
            PopulationComponent { weight: 0.5, prevalence: Some(0.05), ..PopulationComponent::hwe(0.3) },
            PopulationComponent { weight: 0.5, prevalence: Some(0.15), ..PopulationComponent::hwe(0.3) },
        ])
        .unwrap();
        let g = FamilyGenerator::solve(&pop, &RelativeRisks::null(), 0.05).unwrap();
        assert!((g.prevalence() - 0.10).abs() < 1e-15);
        let deltas: Vec<f64> = g.component_params().iter().map(|p| p.delta()).collect();
        assert!((deltas[0] - 0.05).abs() < 1e-15 && (deltas[1] - 0.15).abs() < 1e-15);
    }
}
