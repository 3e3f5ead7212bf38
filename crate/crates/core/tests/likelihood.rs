mod common;

use common::{oracle_penetrance, random_params};
use lime::experiments::table2_setting;
use lime::likelihood::{
    cell_case_prob_pair, cell_case_prob_triad, chi_square_sf, fit, partial_loglik, test_hypotheses, CountsTable,
    FitOptions, Hypothesis,
};
use lime::model::{Param, RiskParameters, EXCLUDED_PAIR, PAIR_TYPES, TRIAD_TYPES};
use lime::simulate::{ascertain, tabulate, AscertainmentSpec, FamilyGenerator, PopulationModel};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Penetrance of each triad and pair type, the heterozygous child of two
/// heterozygous parents averaged over both origins.
fn oracle_cell_penetrance(x: &[f64; 6], m: usize, f: Option<usize>, c: usize) -> f64 {
    if c != 1 {
        return oracle_penetrance(x, m, c, false);
    }
    let maternal = match (m, f) {
        (1, Some(1)) => {
            return 0.5 * (oracle_penetrance(x, m, c, true) + oracle_penetrance(x, m, c, false));
        }
        (0, _) => false,
        (2, _) => true,
        (1, Some(0)) => true,
        _ => false,
    };
    oracle_penetrance(x, m, c, maternal)
}

/// Log partial likelihood summed cell by cell from the binomial form.
fn oracle_loglik(x: &[f64; 6], counts: &CountsTable, prev: f64) -> f64 {
    let term = |pen: f64, big1: f64, big0: f64, n1: u64, n0: u64| {
        let a = big1 * pen / prev;
        let b = big0 * (1.0 - pen) / (1.0 - prev);
        let p = a / (a + b);
        let mut s = 0.0;
        if n1 > 0 {
            s += n1 as f64 * p.ln();
        }
        if n0 > 0 {
            s += n0 as f64 * (1.0 - p).ln();
        }
        s
    };
    let (t1, t0) = (counts.n1_triad.iter().sum::<u64>() as f64, counts.n0_triad.iter().sum::<u64>() as f64);
    let (p1, p0) = (counts.n1_pair.iter().sum::<u64>() as f64, counts.n0_pair.iter().sum::<u64>() as f64);
    let mut ll = 0.0;
    for (i, t) in TRIAD_TYPES.iter().enumerate() {
        let pen = oracle_cell_penetrance(x, t.m.index(), Some(t.f.index()), t.c.index());
        ll += term(pen, t1, t0, counts.n1_triad[i], counts.n0_triad[i]);
    }
    for (i, p) in PAIR_TYPES.iter().enumerate() {
        if p.m.index() == 1 && p.c.index() == 1 {
            continue;
        }
        let pen = oracle_cell_penetrance(x, p.m.index(), None, p.c.index());
        ll += term(pen, p1, p0, counts.n1_pair[i], counts.n0_pair[i]);
    }
    ll
}

fn random_counts<R: Rng>(rng: &mut R) -> CountsTable {
    let mut c = CountsTable::empty();
    for i in 0..15 {
        c.n1_triad[i] = rng.random_range(0..30);
        c.n0_triad[i] = rng.random_range(0..30);
    }
    for i in 0..7 {
        c.n1_pair[i] = rng.random_range(0..30);
        c.n0_pair[i] = rng.random_range(0..30);
    }
    c
}

fn simulate(setting: u8, vaf: f64, prev: f64, cases: u64, controls: u64, missing: f64, seed: u64) -> (CountsTable, RiskParameters<f64>, f64) {
    let risks = table2_setting(setting).unwrap();
    let gen = FamilyGenerator::solve(&PopulationModel::hwe(vaf), &risks, prev).unwrap();
    let spec = AscertainmentSpec { target_cases: cases, target_controls: controls, missing_father_prob: missing };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = ascertain(&gen, &spec, &mut rng).unwrap();
    (tabulate(&records).unwrap(), gen.component_params()[0], gen.prevalence())
}

fn rel(est: f64, truth: f64) -> f64 {
    ((est - truth) / truth).abs()
}

proptest! {
    #[test]
    fn loglik_matches_cellwise_sum(seed in any::<u64>(), prev in 0.01f64..0.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = random_params(&mut rng);
        let counts = random_counts(&mut rng);
        let got = partial_loglik(&params, &counts, prev).unwrap();
        let want = oracle_loglik(&params.to_array(), &counts, prev);
        prop_assert!(got <= 0.0);
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
    }

    #[test]
    fn null_point_gives_design_fraction(n1 in 1u32..1000, n0 in 1u32..1000, prev in 0.01f64..0.5) {
        let params = RiskParameters::<f64>::from_array([prev, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let want = n1 as f64 / (n1 as f64 + n0 as f64);
        for t in TRIAD_TYPES.iter() {
            let p = cell_case_prob_triad(&params, prev, n1 as f64, n0 as f64, t).unwrap();
            prop_assert!((p - want).abs() < 1e-12);
        }
    }
}

#[test]
fn pair_worked_value() {
    let params = RiskParameters::<f64>::from_array([0.05, 1.0, 3.0, 1.0, 1.0, 2.0]).unwrap();
    let p = cell_case_prob_pair(&params, 0.05, 100.0, 100.0, &PAIR_TYPES[6]).unwrap();
    assert!((p - 114.0 / 128.0).abs() < 1e-14);
    assert!(cell_case_prob_pair(&params, 0.05, 100.0, 100.0, &PAIR_TYPES[EXCLUDED_PAIR]).is_err());
}

#[test]
fn type_eight_matches_neighbours_without_imprinting() {
    let params = RiskParameters::<f64>::from_array([0.02, 1.7, 2.5, 1.0, 1.3, 1.9]).unwrap();
    let p = |i: usize| cell_case_prob_triad(&params, 0.05, 80.0, 120.0, &TRIAD_TYPES[i - 1]).unwrap();
    assert_eq!(p(8), p(6));
    assert_eq!(p(8), p(10));
}

#[test]
fn empty_and_balanced_logliks() {
    let params = RiskParameters::<f64>::from_array([0.05, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
    assert_eq!(partial_loglik(&params, &CountsTable::empty(), 0.05).unwrap(), 0.0);
    let mut counts = CountsTable::empty();
    counts.n1_triad = [3; 15];
    counts.n0_triad = [3; 15];
    counts.n1_pair = [5; 7];
    counts.n0_pair = [5; 7];
    let included = 90 + 60;
    let ll = partial_loglik(&params, &counts, 0.05).unwrap();
    assert!((ll - included as f64 * 0.5f64.ln()).abs() < 1e-10);
}

#[test]
fn fit_dominates_generating_point() {
    for (i, setting) in [1u8, 2, 5, 6, 7, 8].into_iter().enumerate() {
        let (counts, truth, prev) = simulate(setting, 0.3, 0.05, 150, 150, 0.5, 500 + i as u64);
        let est = fit(&counts, prev, None, &FitOptions::default()).unwrap();
        let at_truth = partial_loglik(&truth, &counts, prev).unwrap();
        assert!(est.loglik >= at_truth - 1e-6, "setting {setting}: {} < {at_truth}", est.loglik);
    }
}

#[test]
fn lrt_nesting_and_degrees_of_freedom() {
    let hyps = [Hypothesis::association(), Hypothesis::imprinting(), Hypothesis::maternal()];
    for seed in 0..10 {
        let (counts, _, prev) = simulate(1 + (seed % 8) as u8, 0.3, 0.05, 150, 150, 0.5, 700 + seed);
        let res = test_hypotheses(&counts, prev, &hyps, &FitOptions::default()).unwrap();
        let dfs: Vec<usize> = res.iter().map(|r| r.df).collect();
        assert_eq!(dfs, [5, 1, 2]);
        for r in &res {
            assert!(r.statistic >= 0.0);
            assert!((0.0..=1.0).contains(&r.p_value));
            assert!(r.full.loglik >= r.null.loglik);
            let raw = 2.0 * (r.full.loglik - r.null.loglik);
            assert!((r.statistic - raw.max(0.0)).abs() < 1e-12);
        }
    }
    let (counts, _, prev) = simulate(3, 0.3, 0.05, 150, 150, 1.0, 11);
    let res = test_hypotheses(&counts, prev, &[Hypothesis::association()], &FitOptions::pair_only()).unwrap();
    assert_eq!(res[0].df, 4);
    assert_eq!(chi_square_sf(0.0, 3), 1.0);
}

// A single 5000 + 5000 dataset leaves R2 with roughly 15% sampling spread, so
// the check uses the median over nine independent datasets.
#[test]
fn recovers_setting_two_from_complete_triads() {
    let fits: Vec<_> = (0..9)
        .map(|seed| {
            let (counts, truth, prev) = simulate(2, 0.3, 0.05, 5000, 5000, 0.0, 21 + seed);
            (fit(&counts, prev, None, &FitOptions::default()).unwrap(), truth)
        })
        .collect();
    for p in Param::ALL {
        let mut v: Vec<f64> = fits.iter().map(|(f, _)| f.estimates.get(p)).collect();
        v.sort_by(f64::total_cmp);
        let truth = fits[0].1.get(p);
        assert!(rel(v[4], truth) < 0.10, "{p}: median {} vs {truth}", v[4]);
    }
}

#[test]
fn null_recovery_at_scale() {
    let (counts, _, prev) = simulate(1, 0.3, 0.05, 5000, 5000, 0.5, 22);
    let est = fit(&counts, prev, None, &FitOptions::default()).unwrap();
    for p in Param::RISKS {
        assert!(rel(est.estimates.get(p), 1.0) < 0.15, "{p}: {}", est.estimates.get(p));
    }
    assert!(rel(est.estimates.delta(), prev) < 0.15);
}

#[test]
fn pairs_only_recovery_at_scale() {
    let (counts, truth, prev) = simulate(4, 0.3, 0.05, 10000, 10000, 1.0, 23);
    assert_eq!(counts.triad_cases() + counts.triad_controls(), 0);
    let est = fit(&counts, prev, None, &FitOptions::pair_only()).unwrap();
    assert_eq!(est.estimates.get(Param::Rim), 1.0);
    for p in [Param::R1, Param::R2, Param::S1, Param::S2] {
        assert!(rel(est.estimates.get(p), truth.get(p)) < 0.15, "{p}: {} vs {}", est.estimates.get(p), truth.get(p));
    }
}

#[test]
fn single_precision_loglik() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let params = random_params(&mut rng);
    let counts = random_counts(&mut rng);
    let p32: RiskParameters<f32> = params.cast().unwrap();
    let a = partial_loglik(&params, &counts, 0.05).unwrap();
    let b = partial_loglik(&p32, &counts, 0.05f32).unwrap() as f64;
    assert!(((a - b) / a).abs() < 1e-4);
}
