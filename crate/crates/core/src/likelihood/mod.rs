//! Counts, the partial likelihood, and its maximization and tests.

mod counts;
mod fit;
mod hypothesis;
mod lrt;
mod partial;

pub use counts::CountsTable;
pub use fit::{fit, fit_pinned, FitOptions, FitResult};
pub use hypothesis::{Hypothesis, HypothesisKind, ParamSet, Sidedness};
pub use lrt::{chi_square_sf, degrees_of_freedom, lrt, one_sided_p, test_hypotheses, TestResult};
pub use partial::{cell_case_prob_pair, cell_case_prob_triad, excluded_cells, is_informative, partial_loglik};


