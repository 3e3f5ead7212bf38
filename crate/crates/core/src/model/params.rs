use std::fmt;

use serde::{Deserialize, Serialize};

use super::{determined_origin, GenotypeScore, Origin, PairType, TriadType};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The six disease-model parameters, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    Delta,
    R1,
    R2,
    Rim,
    S1,
    S2,
}

impl Param {
    pub const ALL: [Param; 6] = [Param::Delta, Param::R1, Param::R2, Param::Rim, Param::S1, Param::S2];
    pub const RISKS: [Param; 5] = [Param::R1, Param::R2, Param::Rim, Param::S1, Param::S2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Delta => "delta",
            Param::R1 => "r1",
            Param::R2 => "r2",
            Param::Rim => "r_im",
            Param::S1 => "s1",
            Param::S2 => "s2",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relative risks of the child's genotype (R1, R2), of a maternally inherited
/// single copy (R_im) and of the mother's genotype (S1, S2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeRisks<T = f64> {
    pub r1: T,
    pub r2: T,
    pub r_im: T,
    pub s1: T,
    pub s2: T,
}

impl<T: Scalar> RelativeRisks<T> {
    pub fn new(r1: T, r2: T, r_im: T, s1: T, s2: T) -> Result<Self> {
        let risks = Self { r1, r2, r_im, s1, s2 };
        risks.validate()?;
        Ok(risks)
    }

    /// All relative risks equal to one.
    pub fn null() -> Self {
        let one = T::one();
        Self { r1: one, r2: one, r_im: one, s1: one, s2: one }
    }

    pub fn validate(&self) -> Result<()> {
        for p in Param::RISKS {
            let v = self.get(p);
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name: p.name(),
                    value: v.to_f64().unwrap_or(f64::NAN),
                    reason: "relative risks must be positive and finite",
                });
            }
        }
        Ok(())
    }

    /// Value of one relative risk; `Param::Delta` is not a relative risk and
    /// returns one.
    pub fn get(&self, p: Param) -> T {
        match p {
            Param::Delta => T::one(),
            Param::R1 => self.r1,
            Param::R2 => self.r2,
            Param::Rim => self.r_im,
            Param::S1 => self.s1,
            Param::S2 => self.s2,
        }
    }

    pub fn set(&mut self, p: Param, value: T) {
        match p {
            Param::Delta => {}
            Param::R1 => self.r1 = value,
            Param::R2 => self.r2 = value,
            Param::Rim => self.r_im = value,
            Param::S1 => self.s1 = value,
            Param::S2 => self.s2 = value,
        }
    }

    /// Product of the relative risks that apply to a (mother, child) cell.
    /// `origin` only matters for a heterozygous child.
    pub fn product(&self, m: GenotypeScore, c: GenotypeScore, origin: Option<Origin>) -> T {
        let mut v = T::one();
        match c.value() {
            1 => {
                v *= self.r1;
                if origin == Some(Origin::Maternal) {
                    v *= self.r_im;
                }
            }
            2 => v *= self.r2,
            _ => {}
        }
        match m.value() {
            1 => v *= self.s1,
            2 => v *= self.s2,
            _ => {}
        }
        v
    }

    /// Origin-averaged relative-risk product of a triad type.
    pub fn triad_product(&self, t: &TriadType) -> T {
        match (t.c.value(), determined_origin(t.m, t.f)) {
            (1, None) => {
                T::half()
                    * (self.product(t.m, t.c, Some(Origin::Maternal))
                        + self.product(t.m, t.c, Some(Origin::Paternal)))
            }
            (1, origin) => self.product(t.m, t.c, origin),
            _ => self.product(t.m, t.c, None),
        }
    }

    pub fn cast<U: Scalar>(&self) -> RelativeRisks<U> {
        let c = |x: T| U::lit(x.to_f64().expect("finite"));
        RelativeRisks { r1: c(self.r1), r2: c(self.r2), r_im: c(self.r_im), s1: c(self.s1), s2: c(self.s2) }
    }
}

/// The (mother, child, origin) cells in which a penetrance is realized by some
/// triad type. Feasibility is checked over exactly these.
pub const PENETRANCE_CELLS: [(u8, u8, Option<Origin>); 8] = [
    (0, 0, None),
    (0, 1, Some(Origin::Paternal)),
    (1, 0, None),
    (1, 1, Some(Origin::Maternal)),
    (1, 1, Some(Origin::Paternal)),
    (1, 2, None),
    (2, 1, Some(Origin::Maternal)),
    (2, 2, None),
];

/// Phenocopy rate plus relative risks, feasible by construction: every
/// realized penetrance lies in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskParameters<T = f64> {
    delta: T,
    risks: RelativeRisks<T>,
}

impl<T: Scalar> RiskParameters<T> {
    pub fn new(delta: T, risks: RelativeRisks<T>) -> Result<Self> {
        if !(delta > T::zero() && delta < T::one()) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta.to_f64().unwrap_or(f64::NAN),
                reason: "phenocopy rate must lie in (0, 1)",
            });
        }
        risks.validate()?;
        let params = Self { delta, risks };
        params.check_feasible()?;
        Ok(params)
    }

    /// Builds from `[delta, r1, r2, r_im, s1, s2]`.
    pub fn from_array(values: [T; 6]) -> Result<Self> {
        let [delta, r1, r2, r_im, s1, s2] = values;
        Self::new(delta, RelativeRisks { r1, r2, r_im, s1, s2 })
    }

    pub fn to_array(&self) -> [T; 6] {
        let r = &self.risks;
        [self.delta, r.r1, r.r2, r.r_im, r.s1, r.s2]
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn risks(&self) -> &RelativeRisks<T> {
        &self.risks
    }

    pub fn get(&self, p: Param) -> T {
        match p {
            Param::Delta => self.delta,
            other => self.risks.get(other),
        }
    }

    /// Fails on the first realized cell whose penetrance is not below one.
    fn check_feasible(&self) -> Result<()> {
        for (m, c, origin) in PENETRANCE_CELLS {
            let m = GenotypeScore(m);
            let c = GenotypeScore(c);
            let pen = self.delta * self.risks.product(m, c, origin);
            if !(pen < T::one()) {
                return Err(Error::Infeasible {
                    mother: m.value(),
                    child: c.value(),
                    origin,
                    penetrance: pen.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    pub fn cast<U: Scalar>(&self) -> Result<RiskParameters<U>> {
        RiskParameters::new(U::lit(self.delta.to_f64().expect("finite")), self.risks.cast())
    }
}

/// P(D = 1 | M = m, C = c, origin) under the multiplicative relative-risk
/// model. `origin` must be given exactly when the child is heterozygous.
pub fn penetrance<T: Scalar>(
    params: &RiskParameters<T>,
    m: GenotypeScore,
    c: GenotypeScore,
    origin: Option<Origin>,
) -> Result<T> {
    match (c.value(), origin) {
        (1, None) => {
            return Err(Error::Contract(
                "penetrance of a heterozygous child needs the parental origin".into(),
            ))
        }
        (0 | 2, Some(_)) => {
            return Err(Error::Contract(format!(
                "parental origin given for a homozygous child (c={c})"
            )))
        }
        _ => {}
    }
    let pen = params.delta() * params.risks().product(m, c, origin);
    if pen < T::one() {
        Ok(pen)
    } else {
        Err(Error::Infeasible {
            mother: m.value(),
            child: c.value(),
            origin,
            penetrance: pen.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// P(D = 1 | m, f, c) for a triad type, averaging the two equally likely
/// origins of the (1,1,1) type.
pub fn triad_penetrance<T: Scalar>(params: &RiskParameters<T>, t: &TriadType) -> T {
    params.delta() * params.risks().triad_product(t)
}

/// P(D = 1 | m, c) shared by every triad type of a pair, or `None` for the
/// (1,1) pair where it depends on the father.
pub fn pair_penetrance<T: Scalar>(params: &RiskParameters<T>, p: &PairType) -> Option<T> {
    if p.is_excluded() {
        return None;
    }
    let t = &super::TRIAD_TYPES[p.constituent_triads[0] - 1];
    Some(triad_penetrance(params, t))
}
