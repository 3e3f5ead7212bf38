use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Param;

/// A subset of the six model parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSet([bool; 6]);

impl ParamSet {
    pub const EMPTY: ParamSet = ParamSet([false; 6]);
    pub const ALL: ParamSet = ParamSet([true; 6]);

    pub fn of(params: &[Param]) -> Self {
        let mut s = Self::EMPTY;
        for &p in params {
            s.insert(p);
        }
        s
    }

    pub fn insert(&mut self, p: Param) {
        self.0[p.index()] = true;
    }

    pub fn remove(&mut self, p: Param) {
        self.0[p.index()] = false;
    }

    pub fn contains(&self, p: Param) -> bool {
        self.0[p.index()]
    }

    pub fn union(self, other: Self) -> Self {
        let mut out = self;
        for p in Param::ALL {
            if other.contains(p) {
                out.insert(p);
            }
        }
        out
    }

    pub fn minus(self, other: Self) -> Self {
        let mut out = self;
        for p in Param::ALL {
            if other.contains(p) {
                out.remove(p);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Param> + '_ {
        Param::ALL.into_iter().filter(|p| self.contains(*p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisKind {
    /// R1 = R2 = R_im = S1 = S2 = 1
    Association,
    /// R_im = 1
    Imprinting,
    /// S1 = S2 = 1
    Maternal,
}

impl HypothesisKind {
    pub const ALL: [HypothesisKind; 3] = [Self::Association, Self::Imprinting, Self::Maternal];

    /// Parameters pinned to one under the null.
    pub fn pinned(self) -> ParamSet {
        match self {
            Self::Association => ParamSet::of(&Param::RISKS),
            Self::Imprinting => ParamSet::of(&[Param::Rim]),
            Self::Maternal => ParamSet::of(&[Param::S1, Param::S2]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Association => "association",
            Self::Imprinting => "imprinting",
            Self::Maternal => "maternal",
        }
    }
}

impl fmt::Display for HypothesisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HypothesisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "association" => Ok(Self::Association),
            "imprinting" => Ok(Self::Imprinting),
            "maternal" => Ok(Self::Maternal),
            other => Err(Error::Config(format!("unknown hypothesis `{other}`"))),
        }
    }
}

/// Alternative direction. One-sided alternatives exist only for imprinting:
/// `Greater` is R_im > 1, `Less` is R_im < 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sidedness {
    #[default]
    Two,
    Greater,
    Less,
}

impl FromStr for Sidedness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" => Ok(Self::Two),
            "greater" => Ok(Self::Greater),
            "less" => Ok(Self::Less),
            other => Err(Error::Config(format!("unknown sidedness `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypothesis {
    pub kind: HypothesisKind,
    pub sidedness: Sidedness,
}

impl Hypothesis {
    pub fn new(kind: HypothesisKind, sidedness: Sidedness) -> Result<Self> {
        if sidedness != Sidedness::Two && kind != HypothesisKind::Imprinting {
            return Err(Error::Config(format!("one-sided alternatives apply only to imprinting, not {kind}")));
        }
        Ok(Self { kind, sidedness })
    }

    pub fn two_sided(kind: HypothesisKind) -> Self {
        Self { kind, sidedness: Sidedness::Two }
    }

    pub fn association() -> Self {
        Self::two_sided(HypothesisKind::Association)
    }

    pub fn imprinting() -> Self {
        Self::two_sided(HypothesisKind::Imprinting)
    }

    pub fn maternal() -> Self {
        Self::two_sided(HypothesisKind::Maternal)
    }

    pub fn pinned(&self) -> ParamSet {
        self.kind.pinned()
    }
}
