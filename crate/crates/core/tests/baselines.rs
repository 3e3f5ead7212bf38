use lime::baselines::{cll_cell_probs, cll_fit, ll_lrt_cell_probs, ll_lrt_fit, BaselineOptions, CllVariant, SymmetricMatingParams};
use lime::experiments::table2_setting;
use lime::likelihood::{fit, CountsTable, FitOptions};
use lime::model::{Param, RelativeRisks};
use lime::simulate::{ascertain, tabulate, AscertainmentSpec, FamilyGenerator, PopulationModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn simulate(setting: u8, prev: f64, n: u64, missing: f64, seed: u64) -> (CountsTable, RelativeRisks<f64>) {
    let risks = table2_setting(setting).unwrap();
    let gen = FamilyGenerator::solve(&PopulationModel::hwe(0.3), &risks, prev).unwrap();
    let spec = AscertainmentSpec { target_cases: n, target_controls: n, missing_father_prob: missing };
    let records = ascertain(&gen, &spec, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    (tabulate(&records).unwrap(), risks)
}

fn log_ratio(a: f64, b: f64) -> f64 {
    (a / b).ln().abs()
}

proptest! {
    #[test]
    fn ll_lrt_cells_sum_to_one(
        r in prop::array::uniform5(0.1f64..10.0),
        w in prop::array::uniform6(0.01f64..1.0),
    ) {
        let s: f64 = w.iter().sum();
        let mating = SymmetricMatingParams::new(w.map(|v| v / s)).unwrap();
        let risks = RelativeRisks::new(r[0], r[1], r[2], r[3], r[4]).unwrap();
        let cells = ll_lrt_cell_probs(&risks, &mating);
        prop_assert!((cells.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(cells.iter().all(|&p| p >= 0.0));
        let (case, control) = cll_cell_probs(&risks, &mating, CllVariant::Full);
        prop_assert!((case.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((control.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_mating_is_symmetric(w in prop::array::uniform6(0.01f64..1.0)) {
        let s: f64 = w.iter().sum();
        let table = SymmetricMatingParams::new(w.map(|v| v / s)).unwrap().table();
        prop_assert!((table.iter().flatten().sum::<f64>() - 1.0).abs() < 1e-12);
        for m in 0..3 {
            for f in 0..3 {
                prop_assert_eq!(table[m][f], table[f][m]);
            }
        }
    }
}

#[test]
fn ll_lrt_null_recovery() {
    let (counts, _) = simulate(1, 0.05, 5000, 0.0, 61);
    let est = ll_lrt_fit(&counts.n1_triad, None, &BaselineOptions::default()).unwrap();
    assert!(est.delta.is_none());
    for p in Param::RISKS {
        assert!(log_ratio(est.get(p).unwrap(), 1.0) < 0.15, "{p}: {:?}", est.get(p));
    }
}

#[test]
fn ll_lrt_sees_reduced_imprinting() {
    let (counts, _) = simulate(6, 0.05, 5000, 0.0, 62);
    let est = ll_lrt_fit(&counts.n1_triad, None, &BaselineOptions::default()).unwrap();
    assert!(est.risks.get(Param::Rim) < 0.6, "r_im {}", est.risks.get(Param::Rim));
}

#[test]
fn ll_lrt_agrees_with_partial_likelihood() {
    let (counts, _) = simulate(7, 0.05, 5000, 0.0, 63);
    let ll = ll_lrt_fit(&counts.n1_triad, None, &BaselineOptions::default()).unwrap();
    let lime = fit(&counts, 0.05, None, &FitOptions::default()).unwrap();
    for p in Param::RISKS {
        let (a, b) = (ll.get(p).unwrap(), lime.estimates.get(p));
        assert!(log_ratio(a, b) < 0.2, "{p}: ll-lrt {a}, lime {b}");
    }
}

#[test]
fn cll_recovers_truth_in_its_own_regime() {
    for (setting, seed) in [(1u8, 64), (4, 65)] {
        let (counts, truth) = simulate(setting, 0.002, 5000, 1.0, seed);
        let est = cll_fit(&counts, 0.002, None, &BaselineOptions::default()).unwrap();
        assert_eq!(est.risks.get(Param::Rim), 1.0);
        for p in [Param::R1, Param::R2, Param::S1, Param::S2] {
            let (e, t) = (est.get(p).unwrap(), truth.get(p));
            assert!(log_ratio(e, t) < 0.15, "setting {setting} {p}: {e} vs {t}");
        }
    }
}
