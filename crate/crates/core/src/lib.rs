//! Detection of imprinting and maternal effects from case-parent triads,
//! control-parent triads, and mother-child pairs, using a partial likelihood
//! that does not depend on the mating-type distribution.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
mod error;
pub mod experiments;
pub mod likelihood;
pub mod model;
pub mod optim;
mod scalar;
pub mod simulate;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use likelihood::{CountsTable, FitOptions, FitResult, Hypothesis, HypothesisKind, Sidedness, TestResult};
pub use model::{GenotypeScore, Origin, Param, Status};

pub type RiskParametersF64 = model::RiskParameters<f64>;
pub type RiskParametersF32 = model::RiskParameters<f32>;
pub type RelativeRisksF64 = model::RelativeRisks<f64>;
pub type RelativeRisksF32 = model::RelativeRisks<f32>;
pub type MatingTypeDistributionF64 = model::MatingTypeDistribution<f64>;
pub type MatingTypeDistributionF32 = model::MatingTypeDistribution<f32>;
pub type JointProbabilityTableF64 = model::JointProbabilityTable<f64>;
pub type JointProbabilityTableF32 = model::JointProbabilityTable<f32>;
