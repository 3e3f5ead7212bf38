mod common;

use common::{hwe, oracle_joint, oracle_penetrance, random_mating, random_params};
use lime::model::{
    pair_joint_probability, penetrance, solve_phenocopy, transmission_prob, triad_joint_probability,
    GenotypeScore, JointProbabilityTable, MatingTypeDistribution, Origin, RelativeRisks, RiskParameters, Status,
    PAIR_TYPES, TRIAD_TYPES,
};
use lime::{JointProbabilityTableF32, RiskParametersF32};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(seed: u64) -> (RiskParameters<f64>, MatingTypeDistribution<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_params(&mut rng), random_mating(&mut rng))
}

fn hwe_mu(p: f64) -> MatingTypeDistribution<f64> {
    MatingTypeDistribution::from_parents(hwe(p), hwe(p)).unwrap()
}

proptest! {
    #[test]
    fn joint_table_sums_to_one(seed in any::<u64>()) {
        let (params, mu) = point(seed);
        let table = JointProbabilityTable::compute(&params, &mu);
        prop_assert!((table.total() - 1.0).abs() < 1e-12);
        let pairs: f64 = table.pair_case.iter().chain(&table.pair_control).sum();
        prop_assert!((pairs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_entries_aggregate_triads(seed in any::<u64>()) {
        let (params, mu) = point(seed);
        for p in PAIR_TYPES.iter() {
            for d in [Status::Case, Status::Control] {
                let sum: f64 = TRIAD_TYPES
                    .iter()
                    .filter(|t| t.m == p.m && t.c == p.c)
                    .map(|t| triad_joint_probability(&params, &mu, t, d))
                    .sum();
                prop_assert!((pair_joint_probability(&params, &mu, p, d) - sum).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triad_entries_match_allele_enumeration(seed in any::<u64>()) {
        let (params, mu) = point(seed);
        let oracle = oracle_joint(&params.to_array(), mu.table());
        for t in TRIAD_TYPES.iter() {
            for (d, status) in [(0, Status::Control), (1, Status::Case)] {
                let want = oracle[d][t.m.index()][t.f.index()][t.c.index()];
                prop_assert!((triad_joint_probability(&params, &mu, t, status) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prevalence_identity(seed in any::<u64>(), prev in 0.001f64..0.2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let risks = *random_params(&mut rng).risks();
        let mu = random_mating(&mut rng);
        if let Ok(params) = solve_phenocopy(&risks, &mu, prev) {
            let table = JointProbabilityTable::compute(&params, &mu);
            prop_assert!((table.prevalence() - prev).abs() < 1e-12);
        }
    }

    #[test]
    fn penetrance_matches_product(seed in any::<u64>()) {
        let (params, _) = point(seed);
        let x = params.to_array();
        for m in GenotypeScore::ALL {
            for c in GenotypeScore::ALL {
                let origins: &[Option<Origin>] = if c.value() == 1 {
                    &[Some(Origin::Maternal), Some(Origin::Paternal)]
                } else {
                    &[None]
                };
                for &o in origins {
                    let want = oracle_penetrance(&x, m.index(), c.index(), o == Some(Origin::Maternal));
                    if want < 1.0 {
                        prop_assert!((penetrance(&params, m, c, o).unwrap() - want).abs() < 1e-15);
                    }
                }
            }
        }
    }
}

#[test]
fn transmission_sums_to_one() {
    for m in GenotypeScore::ALL {
        for f in GenotypeScore::ALL {
            let s: f64 = GenotypeScore::ALL.iter().map(|&c| transmission_prob::<f64>(m, f, c)).sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }
    let g = |v| GenotypeScore::new(v).unwrap();
    assert_eq!(transmission_prob::<f64>(g(0), g(0), g(0)), 1.0);
    assert_eq!(transmission_prob::<f64>(g(1), g(1), g(1)), 0.5);
    assert_eq!(transmission_prob::<f64>(g(0), g(2), g(0)), 0.0);
}

#[test]
fn penetrance_worked_values() {
    let g = |v| GenotypeScore::new(v).unwrap();
    let p = RiskParameters::<f64>::from_array([0.05, 1.0, 3.0, 1.0, 1.0, 2.0]).unwrap();
    assert!((penetrance(&p, g(2), g(2), None).unwrap() - 0.3).abs() < 1e-15);
    let p = RiskParameters::<f64>::from_array([0.05, 3.0, 1.0, 3.0, 2.0, 1.0]).unwrap();
    assert!((penetrance(&p, g(1), g(1), Some(Origin::Maternal)).unwrap() - 0.9).abs() < 1e-15);
    let p = RiskParameters::<f64>::from_array([0.07, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
    for m in GenotypeScore::ALL {
        assert_eq!(penetrance(&p, m, g(0), None).unwrap(), 0.07);
    }
}

#[test]
fn table_rows_worked_values() {
    let mu = hwe_mu(0.3);
    let p = RiskParameters::<f64>::from_array([0.04, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
    let mu00 = mu.get(GenotypeScore::ZERO, GenotypeScore::ZERO);
    let mu01 = mu.get(GenotypeScore::ZERO, GenotypeScore::ONE);
    let got = triad_joint_probability(&p, &mu, &TRIAD_TYPES[0], Status::Control);
    assert!((got - mu00 * 0.96).abs() < 1e-15);
    let got = pair_joint_probability(&p, &mu, &PAIR_TYPES[0], Status::Case);
    assert!((got - (mu00 + 0.5 * mu01) * 0.04).abs() < 1e-15);
}

/// δ from an independent sum over the allele-enumeration table.
fn oracle_delta(risks: [f64; 5], mu: &MatingTypeDistribution<f64>, prev: f64) -> f64 {
    let x = [1.0, risks[0], risks[1], risks[2], risks[3], risks[4]];
    let mut mass = 0.0;
    for m in 0..3 {
        for f in 0..3 {
            for am in 0..2 {
                for af in 0..2 {
                    let pm = [1.0 - m as f64 / 2.0, m as f64 / 2.0][am];
                    let pf = [1.0 - f as f64 / 2.0, f as f64 / 2.0][af];
                    let c = am + af;
                    mass += mu.table()[m][f] * pm * pf * oracle_penetrance(&x, m, c, c == 1 && am == 1);
                }
            }
        }
    }
    prev / mass
}

#[test]
fn solve_phenocopy_matches_oracle() {
    for (risks, vaf, prev) in [([2.0, 3.0, 1.0, 1.0, 1.0], 0.3, 0.05), ([1.0, 3.0, 3.0, 1.0, 1.0], 0.1, 0.15)] {
        let mu = hwe_mu(vaf);
        let rr = RelativeRisks::new(risks[0], risks[1], risks[2], risks[3], risks[4]).unwrap();
        let params = solve_phenocopy(&rr, &mu, prev).unwrap();
        assert!((params.delta() - oracle_delta(risks, &mu, prev)).abs() < 1e-15);
        let table = JointProbabilityTable::compute(&params, &mu);
        assert!((table.prevalence() - prev).abs() < 1e-12);
    }
}

#[test]
fn solve_phenocopy_frozen_values() {
    let mu = hwe_mu(0.5);
    // All risks 1: δ is the prevalence.
    let p = solve_phenocopy(&RelativeRisks::null(), &mu, 0.03125).unwrap();
    assert_eq!(p.delta(), 0.03125);
    // R2 = 3 at VAF 0.5: mass = 0.25 + 0.5 + 0.75 = 1.5, so δ = 0.1875 / 1.5.
    let rr = RelativeRisks::new(1.0, 3.0, 1.0, 1.0, 1.0).unwrap();
    let p = solve_phenocopy(&rr, &mu, 0.1875).unwrap();
    assert!((p.delta() - 0.125).abs() < 1e-16);
    assert!(solve_phenocopy(&rr, &mu, 1.0).is_err());
}

#[test]
fn single_precision_agrees() {
    let (params, mu) = point(9);
    let p32: RiskParametersF32 = params.cast().unwrap();
    let mu32 = MatingTypeDistribution::<f32>::new(mu.table().map(|r| r.map(|v| v as f32))).unwrap();
    let t64 = JointProbabilityTable::compute(&params, &mu);
    let t32: JointProbabilityTableF32 = JointProbabilityTable::compute(&p32, &mu32);
    assert!((t32.total() - 1.0).abs() < 1e-5);
    for i in 0..15 {
        assert!((t32.triad_case[i] as f64 - t64.triad_case[i]).abs() < 1e-6);
        assert!((t32.triad_control[i] as f64 - t64.triad_control[i]).abs() < 1e-6);
    }
}
