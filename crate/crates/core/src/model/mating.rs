use serde::{Deserialize, Serialize};

use super::GenotypeScore;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Population probabilities of (mother, father) genotype pairs. No symmetry
/// between the mother and father axes is assumed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatingTypeDistribution<T = f64> {
    mu: [[T; 3]; 3],
}

impl<T: Scalar> MatingTypeDistribution<T> {
    /// `mu[m][f]` is the probability that the mother carries `m` and the
    /// father `f` variant alleles.
    pub fn new(mu: [[T; 3]; 3]) -> Result<Self> {
        let mut total = T::zero();
        for row in &mu {
            for &v in row {
                if !(v >= T::zero()) || !v.is_finite() {
                    return Err(Error::InvalidMating(format!("negative or non-finite entry {v}")));
                }
                total += v;
            }
        }
        if (total - T::one()).abs() > T::sum_tolerance() {
            return Err(Error::InvalidMating(format!("entries sum to {total}, not 1")));
        }
        Ok(Self { mu })
    }

    /// Independent parents: `mu[m][f] = maternal[m] * paternal[f]`.
    pub fn from_parents(maternal: [T; 3], paternal: [T; 3]) -> Result<Self> {
        let mut mu = [[T::zero(); 3]; 3];
        for m in 0..3 {
            for f in 0..3 {
                mu[m][f] = maternal[m] * paternal[f];
            }
        }
        Self::new(mu)
    }

    /// Weighted mixture of distributions (weights must sum to one).
    pub fn mixture(components: &[(T, Self)]) -> Result<Self> {
        let mut mu = [[T::zero(); 3]; 3];
        for (w, d) in components {
            for (row, src) in mu.iter_mut().zip(&d.mu) {
                for (v, &x) in row.iter_mut().zip(src) {
                    *v += *w * x;
                }
            }
        }
        Self::new(mu)
    }

    pub fn uniform() -> Self {
        let v = T::one() / T::lit(9.0);
        Self { mu: [[v; 3]; 3] }
    }

    #[inline]
    pub fn get(&self, m: GenotypeScore, f: GenotypeScore) -> T {
        self.mu[m.index()][f.index()]
    }

    pub fn table(&self) -> &[[T; 3]; 3] {
        &self.mu
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (0..3).all(|m| (0..3).all(|f| (self.mu[m][f] - self.mu[f][m]).abs() <= tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(MatingTypeDistribution::new([[0.5, 0.0, 0.0], [0.0; 3], [0.0; 3]]).is_err());
        assert!(MatingTypeDistribution::new([[1.5, -0.5, 0.0], [0.0; 3], [0.0; 3]]).is_err());
        assert!(MatingTypeDistribution::new([[1.0, 0.0, 0.0], [0.0; 3], [0.0; 3]]).is_ok());
    }

    #[test]
    fn asymmetric_tables_are_allowed() {
        let d = MatingTypeDistribution::<f64>::from_parents([0.5, 0.3, 0.2], [0.2, 0.3, 0.5]).unwrap();
        assert!(!d.is_symmetric(1e-9));
        assert!((d.get(GenotypeScore::ZERO, GenotypeScore::TWO) - 0.25).abs() < 1e-15);
    }
}
