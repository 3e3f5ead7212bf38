//! The nuisance-free partial likelihood.
//!
//! Within each triad type (and each pair type other than (1,1)) the number of
//! case families among all families of that type is binomial with probability
//!
//! ```text
//! p = N1 * P(D=1|cell) / P(D=1)
//!     / (N1 * P(D=1|cell) / P(D=1) + N0 * P(D=0|cell) / P(D=0))
//! ```
//!
//! where `N1`, `N0` are the design totals of the family structure (triads or
//! pairs). The mating-type probabilities cancel from this ratio.

use super::CountsTable;
use crate::error::{Error, Result};
use crate::model::{pair_penetrance, triad_penetrance, PairType, RiskParameters, TriadType, PAIR_TYPES, TRIAD_TYPES};
use crate::scalar::{xlogy, Scalar};

/// Case and control probabilities `(p, 1 - p)` of a cell with penetrance
/// `pen`. Computed separately so that `1 - p` keeps full precision.
#[inline]
fn case_control_split<T: Scalar>(pen: T, prevalence: T, n_case: T, n_control: T) -> (T, T) {
    let a = n_case * pen / prevalence;
    let b = n_control * (T::one() - pen) / (T::one() - prevalence);
    let s = a + b;
    (a / s, b / s)
}

fn check_design<T: Scalar>(prevalence: T, n_case: T, n_control: T) -> Result<()> {
    if !(prevalence > T::zero() && prevalence < T::one()) {
        return Err(Error::InvalidParameter {
            name: "prevalence",
            value: prevalence.to_f64().unwrap_or(f64::NAN),
            reason: "prevalence must lie in (0, 1)",
        });
    }
    if !(n_case + n_control > T::zero()) {
        return Err(Error::Contract("design has no families (N1 + N0 = 0)".into()));
    }
    Ok(())
}

/// Probability that a triad family of type `t` is a case family.
pub fn cell_case_prob_triad<T: Scalar>(
    params: &RiskParameters<T>,
    prevalence: T,
    n_case: T,
    n_control: T,
    t: &TriadType,
) -> Result<T> {
    check_design(prevalence, n_case, n_control)?;
    Ok(case_control_split(triad_penetrance(params, t), prevalence, n_case, n_control).0)
}

/// Probability that a mother-child pair of type `p` is a case pair. The (1,1)
/// pair is rejected: its penetrance depends on the unobserved father.
pub fn cell_case_prob_pair<T: Scalar>(
    params: &RiskParameters<T>,
    prevalence: T,
    n_case: T,
    n_control: T,
    p: &PairType,
) -> Result<T> {
    check_design(prevalence, n_case, n_control)?;
    let pen = pair_penetrance(params, p).ok_or_else(|| {
        Error::Contract("the (1,1) mother-child pair is excluded from the partial likelihood".into())
    })?;
    Ok(case_control_split(pen, prevalence, n_case, n_control).0)
}

fn cast<T: Scalar>(n: u64) -> T {
    T::from_u64(n).expect("count representable")
}

/// Log partial likelihood. Zero-count cells and the (1,1) pair contribute
/// nothing; a cell with p = 0 or 1 against an opposing count yields `-inf`.
pub fn partial_loglik<T: Scalar>(params: &RiskParameters<T>, counts: &CountsTable, prevalence: T) -> Result<T> {
    if !(prevalence > T::zero() && prevalence < T::one()) {
        return Err(Error::InvalidParameter {
            name: "prevalence",
            value: prevalence.to_f64().unwrap_or(f64::NAN),
            reason: "prevalence must lie in (0, 1)",
        });
    }
    Ok(loglik_unchecked(params, counts, prevalence))
}

pub(crate) fn loglik_unchecked<T: Scalar>(params: &RiskParameters<T>, counts: &CountsTable, prevalence: T) -> T {
    let mut ll = T::zero();

    let (nt1, nt0) = (counts.triad_cases(), counts.triad_controls());
    if nt1 + nt0 > 0 {
        let (nt1, nt0) = (cast::<T>(nt1), cast::<T>(nt0));
        for t in TRIAD_TYPES.iter() {
            let (k1, k0) = (counts.n1_triad[t.index - 1], counts.n0_triad[t.index - 1]);
            if k1 + k0 == 0 {
                continue;
            }
            let (p, q) = case_control_split(triad_penetrance(params, t), prevalence, nt1, nt0);
            ll += xlogy(cast::<T>(k1), p) + xlogy(cast::<T>(k0), q);
        }
    }

    let (np1, np0) = (counts.pair_cases(), counts.pair_controls());
    if np1 + np0 > 0 {
        let (np1, np0) = (cast::<T>(np1), cast::<T>(np0));
        for p in PAIR_TYPES.iter() {
            let Some(pen) = pair_penetrance(params, p) else { continue };
            let (k1, k0) = (counts.n1_pair[p.index - 1], counts.n0_pair[p.index - 1]);
            if k1 + k0 == 0 {
                continue;
            }
            let (pc, qc) = case_control_split(pen, prevalence, np1, np0);
            ll += xlogy(cast::<T>(k1), pc) + xlogy(cast::<T>(k0), qc);
        }
    }
    ll
}

/// Canonical labels of the cells that carry no information: zero-count
/// cells of a design that is present, and the (1,1) pair whenever pairs are
/// present.
pub fn excluded_cells(counts: &CountsTable) -> Vec<String> {
    let mut out = Vec::new();
    if counts.triad_cases() + counts.triad_controls() > 0 {
        for t in TRIAD_TYPES.iter() {
            if counts.n1_triad[t.index - 1] + counts.n0_triad[t.index - 1] == 0 {
                out.push(format!("triad_{}", t.index));
            }
        }
    }
    if counts.pair_cases() + counts.pair_controls() > 0 {
        for p in PAIR_TYPES.iter() {
            if p.is_excluded() || counts.n1_pair[p.index - 1] + counts.n0_pair[p.index - 1] == 0 {
                out.push(format!("pair_{}_{}", p.m, p.c));
            }
        }
    }
    out
}

/// Whether the counts can inform the risk parameters at all: some design has
/// both cases and controls and a non-empty included cell.
pub fn is_informative(counts: &CountsTable) -> bool {
    let triads = counts.triad_cases() > 0
        && counts.triad_controls() > 0
        && TRIAD_TYPES.iter().any(|t| counts.n1_triad[t.index - 1] + counts.n0_triad[t.index - 1] > 0);
    let pairs = counts.pair_cases() > 0
        && counts.pair_controls() > 0
        && PAIR_TYPES
            .iter()
            .any(|p| !p.is_excluded() && counts.n1_pair[p.index - 1] + counts.n0_pair[p.index - 1] > 0);
    triads || pairs
}
