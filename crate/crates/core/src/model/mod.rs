//! Genotype bookkeeping, the multiplicative penetrance model and the exact
//! joint probability tables of disease status and family genotypes.
//!
//! Triad types are numbered 1..=15 and pair types 1..=7 in the canonical
//! order used throughout the crate (mother, father, child scores ascending).

mod joint;
mod mating;
mod params;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use joint::{
    pair_joint_probability, risk_weighted_mass, solve_phenocopy, triad_joint_probability,
    JointProbabilityTable,
};
pub use mating::MatingTypeDistribution;
pub use params::{
    pair_penetrance, penetrance, triad_penetrance, Param, RelativeRisks, RiskParameters,
    PENETRANCE_CELLS,
};

/// Number of variant alleles carried by an individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct GenotypeScore(u8);

impl GenotypeScore {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);
    pub const TWO: Self = Self(2);
    pub const ALL: [Self; 3] = [Self::ZERO, Self::ONE, Self::TWO];

    pub fn new(value: u8) -> Result<Self> {
        if value <= 2 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidGenotype(value as i64))
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u8> for GenotypeScore {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Self::new(value)
    }
}

impl From<GenotypeScore> for u8 {
    fn from(g: GenotypeScore) -> u8 {
        g.0
    }
}

impl fmt::Display for GenotypeScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parent that transmitted the single variant allele of a heterozygous child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    Maternal,
    Paternal,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Maternal => f.write_str("maternal"),
            Origin::Paternal => f.write_str("paternal"),
        }
    }
}

/// Case (affected child) or control (unaffected child).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Control,
    Case,
}

impl Status {
    pub fn from_affected(affected: bool) -> Self {
        if affected {
            Status::Case
        } else {
            Status::Control
        }
    }

    pub fn is_case(self) -> bool {
        self == Status::Case
    }
}

/// One of the 15 Mendelian-compatible (mother, father, child) combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriadType {
    /// 1-based canonical index.
    pub index: usize,
    pub m: GenotypeScore,
    pub f: GenotypeScore,
    pub c: GenotypeScore,
}

/// One of the 7 (mother, child) combinations, with the triad types that
/// collapse into it when the father is unobserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairType {
    /// 1-based canonical index.
    pub index: usize,
    pub m: GenotypeScore,
    pub c: GenotypeScore,
    pub constituent_triads: &'static [usize],
}

impl PairType {
    /// The heterozygous mother / heterozygous child pair, whose penetrance
    /// does not factor out of the mating-type sum.
    pub fn is_excluded(&self) -> bool {
        self.m == GenotypeScore::ONE && self.c == GenotypeScore::ONE
    }
}

const fn g(v: u8) -> GenotypeScore {
    GenotypeScore(v)
}

const fn triad(index: usize, m: u8, f: u8, c: u8) -> TriadType {
    TriadType {
        index,
        m: g(m),
        f: g(f),
        c: g(c),
    }
}

pub const TRIAD_TYPES: [TriadType; 15] = [
    triad(1, 0, 0, 0),
    triad(2, 0, 1, 0),
    triad(3, 0, 1, 1),
    triad(4, 0, 2, 1),
    triad(5, 1, 0, 0),
    triad(6, 1, 0, 1),
    triad(7, 1, 1, 0),
    triad(8, 1, 1, 1),
    triad(9, 1, 1, 2),
    triad(10, 1, 2, 1),
    triad(11, 1, 2, 2),
    triad(12, 2, 0, 1),
    triad(13, 2, 1, 1),
    triad(14, 2, 1, 2),
    triad(15, 2, 2, 2),
];

pub const PAIR_TYPES: [PairType; 7] = [
    PairType { index: 1, m: g(0), c: g(0), constituent_triads: &[1, 2] },
    PairType { index: 2, m: g(0), c: g(1), constituent_triads: &[3, 4] },
    PairType { index: 3, m: g(1), c: g(0), constituent_triads: &[5, 7] },
    PairType { index: 4, m: g(1), c: g(1), constituent_triads: &[6, 8, 10] },
    PairType { index: 5, m: g(1), c: g(2), constituent_triads: &[9, 11] },
    PairType { index: 6, m: g(2), c: g(1), constituent_triads: &[12, 13] },
    PairType { index: 7, m: g(2), c: g(2), constituent_triads: &[14, 15] },
];

/// Position of the excluded (1,1) pair in [`PAIR_TYPES`].
pub const EXCLUDED_PAIR: usize = 3;

/// Canonical triad type of a genotype combination, or `None` when the child
/// is incompatible with the parents.
pub fn triad_type_of(m: GenotypeScore, f: GenotypeScore, c: GenotypeScore) -> Option<&'static TriadType> {
    TRIAD_TYPES.iter().find(|t| t.m == m && t.f == f && t.c == c)
}

pub fn pair_type_of(m: GenotypeScore, c: GenotypeScore) -> Option<&'static PairType> {
    PAIR_TYPES.iter().find(|p| p.m == m && p.c == c)
}

/// Pair type a triad type collapses into when the father is dropped.
pub fn collapse_triad(t: &TriadType) -> &'static PairType {
    pair_type_of(t.m, t.c).expect("every triad type collapses to a pair type")
}

/// Probability that a parent with score `g` transmits the variant allele.
#[inline]
fn transmit<T: Scalar>(g: GenotypeScore) -> T {
    T::lit(g.value() as f64 / 2.0)
}

/// Mendelian P(C = c | M = m, F = f).
pub fn transmission_prob<T: Scalar>(m: GenotypeScore, f: GenotypeScore, c: GenotypeScore) -> T {
    let pm: T = transmit(m);
    let pf: T = transmit(f);
    let one = T::one();
    match c.value() {
        0 => (one - pm) * (one - pf),
        1 => pm * (one - pf) + (one - pm) * pf,
        _ => pm * pf,
    }
}

/// Parental origin of a heterozygous child's variant allele when the parental
/// genotypes force it; `None` for the (1,1) mating, where either parent may
/// have transmitted it.
pub fn determined_origin(m: GenotypeScore, f: GenotypeScore) -> Option<Origin> {
    match (m.value(), f.value()) {
        (1, 1) => None,
        (0, _) | (_, 2) => Some(Origin::Paternal),
        _ => Some(Origin::Maternal),
    }
}
