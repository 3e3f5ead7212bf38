use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MatingTypeDistribution;

/// Genotype-score probabilities of a parent under inbreeding coefficient
/// `zeta` (zero gives Hardy-Weinberg proportions).
pub fn genotype_distribution(vaf: f64, zeta: f64) -> Result<[f64; 3]> {
    if !(vaf > 0.0 && vaf < 1.0) {
        return Err(Error::InvalidParameter { name: "vaf", value: vaf, reason: "must lie in (0, 1)" });
    }
    if !(0.0..1.0).contains(&zeta) {
        return Err(Error::InvalidParameter { name: "zeta", value: zeta, reason: "must lie in [0, 1)" });
    }
    let (p, q) = (vaf, 1.0 - vaf);
    Ok([q * q * (1.0 - zeta) + q * zeta, 2.0 * p * q * (1.0 - zeta), p * p * (1.0 - zeta) + p * zeta])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationComponent {
    pub weight: f64,
    pub vaf: f64,
    pub zeta_male: f64,
    pub zeta_female: f64,
    /// Component-specific prevalence; the scenario prevalence when absent.
    pub prevalence: Option<f64>,
}

impl PopulationComponent {
    pub fn hwe(vaf: f64) -> Self {
        Self { weight: 1.0, vaf, zeta_male: 0.0, zeta_female: 0.0, prevalence: None }
    }

    pub fn inbred(vaf: f64, zeta_male: f64, zeta_female: f64) -> Self {
        Self { zeta_male, zeta_female, ..Self::hwe(vaf) }
    }

    /// (mother, father) genotype distributions.
    pub fn parent_distributions(&self) -> Result<([f64; 3], [f64; 3])> {
        Ok((genotype_distribution(self.vaf, self.zeta_female)?, genotype_distribution(self.vaf, self.zeta_male)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationModel {
    components: Vec<PopulationComponent>,
}

impl PopulationModel {
    pub fn hwe(vaf: f64) -> Self {
        Self { components: vec![PopulationComponent::hwe(vaf)] }
    }

    pub fn inbred(vaf: f64, zeta_male: f64, zeta_female: f64) -> Self {
        Self { components: vec![PopulationComponent::inbred(vaf, zeta_male, zeta_female)] }
    }

    pub fn components(&self) -> &[PopulationComponent] {
        &self.components
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::Config("a population needs at least one component".into()));
        }
        let mut total = 0.0;
        for c in &self.components {
            if !(c.weight > 0.0 && c.weight.is_finite()) {
                return Err(Error::Config(format!("component weight {} is not positive", c.weight)));
            }
            if let Some(prev) = c.prevalence {
                if !(prev > 0.0 && prev < 1.0) {
                    return Err(Error::Config(format!("component prevalence {prev} is outside (0, 1)")));
                }
            }
            c.parent_distributions()?;
            total += c.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("component weights sum to {total}, not 1")));
        }
        Ok(())
    }

    /// Population mating-type distribution (parents independent within a
    /// component; a mixture of components is generally not a product).
    pub fn mating_distribution(&self) -> Result<MatingTypeDistribution<f64>> {
        let parts = self
            .components
            .iter()
            .map(|c| {
                let (female, male) = c.parent_distributions()?;
                Ok((c.weight, MatingTypeDistribution::from_parents(female, male)?))
            })
            .collect::<Result<Vec<_>>>()?;
        MatingTypeDistribution::mixture(&parts)
    }

    /// Marginal (mother, father) genotype distributions.
    pub fn marginal_genotypes(&self) -> Result<([f64; 3], [f64; 3])> {
        let mut female = [0.0; 3];
        let mut male = [0.0; 3];
        for c in &self.components {
            let (fd, md) = c.parent_distributions()?;
            for g in 0..3 {
                female[g] += c.weight * fd[g];
                male[g] += c.weight * md[g];
            }
        }
        Ok((female, male))
    }
}

/// Population made of several subpopulations, sampled per family by weight.
pub fn mixture_population(components: Vec<PopulationComponent>) -> Result<PopulationModel> {
    let pop = PopulationModel { components };
    pop.validate()?;
    Ok(pop)
}
