use lime::experiments::{relative_bias, run_scenario, sensitivity_run, table2_setting, Method, MetricsRow, ScenarioConfig};
use lime::model::Param;
use lime::HypothesisKind;
use statrs::distribution::{Binomial, DiscreteCDF};

fn rate(row: &MetricsRow, k: HypothesisKind) -> f64 {
    row.reject[k as usize].unwrap()
}

fn row(rows: &[MetricsRow], method: Method) -> &MetricsRow {
    rows.iter().find(|r| r.method == method).unwrap()
}

#[test]
fn table2_values() {
    let want = [
        [1.0, 1.0, 1.0, 1.0, 1.0],
        [2.0, 3.0, 1.0, 1.0, 1.0],
        [1.0, 3.0, 1.0, 1.0, 1.0],
        [1.0, 3.0, 1.0, 2.0, 2.0],
        [1.0, 3.0, 3.0, 1.0, 1.0],
        [3.0, 3.0, 1.0 / 3.0, 1.0, 1.0],
        [1.0, 3.0, 3.0, 2.0, 2.0],
        [3.0, 3.0, 1.0 / 3.0, 2.0, 2.0],
    ];
    for (i, w) in want.iter().enumerate() {
        let r = table2_setting(i as u8 + 1).unwrap();
        assert_eq!(Param::RISKS.map(|p| r.get(p)), *w);
    }
    assert!(table2_setting(9).is_err());
}

#[test]
fn relative_bias_examples() {
    assert!((relative_bias(2.2, 2.0).unwrap() - 0.1).abs() < 1e-12);
    assert_eq!(relative_bias(1.7, 1.7).unwrap(), 0.0);
    assert!((relative_bias(0.3, 1.0 / 3.0).unwrap() + 0.1).abs() < 1e-12);
    assert!(relative_bias(1.0, 0.0).is_err());
}

#[test]
fn null_rates_within_binomial_interval() {
    let mut cfg = ScenarioConfig::standard(1, 0.3, 0.05).unwrap();
    cfg.methods = vec![Method::LimeMix];
    cfg.base_seed = 4001;
    let n = cfg.replicates;
    let res = run_scenario(&cfg).unwrap();
    let r = &res.rows[0];
    let m = r.converged as u64;
    let bin = Binomial::new(0.05, m).unwrap();
    let lo = (0..=m).find(|&k| bin.cdf(k) > 0.005).unwrap() as f64 / m as f64;
    let hi = (0..=m).find(|&k| bin.cdf(k) >= 0.995).unwrap() as f64 / m as f64;
    assert_eq!(r.replicates, n);
    for k in HypothesisKind::ALL {
        let x = rate(r, k);
        assert!(x >= lo && x <= hi, "{k}: {x} outside [{lo}, {hi}]");
    }
}

#[test]
fn imprinting_power_and_cll_confounding_in_setting_five() {
    let mut cfg = ScenarioConfig::standard(5, 0.3, 0.05).unwrap();
    cfg.methods = vec![Method::LimeMix, Method::Cll, Method::LimePair];
    cfg.replicates = 200;
    cfg.base_seed = 4002;
    let res = run_scenario(&cfg).unwrap();
    let lime = row(&res.rows, Method::LimeMix);
    assert!(rate(lime, HypothesisKind::Imprinting) > 0.3, "{:?}", lime.reject);
    assert!(rate(row(&res.rows, Method::Cll), HypothesisKind::Maternal) > 0.1);
    assert!(rate(row(&res.rows, Method::LimePair), HypothesisKind::Maternal) > 0.1);
    assert!(row(&res.rows, Method::LimePair).reject[HypothesisKind::Imprinting as usize].is_none());
}

#[test]
fn dropping_heterozygous_pairs_costs_little_power() {
    let mut drops = Vec::new();
    for setting in [2u8, 4] {
        let mut cfg = ScenarioConfig::standard(setting, 0.3, 0.05).unwrap();
        cfg.methods = vec![Method::Cll, Method::CllDrop11];
        cfg.replicates = 200;
        cfg.base_seed = 4003;
        let res = run_scenario(&cfg).unwrap();
        for k in [HypothesisKind::Association, HypothesisKind::Maternal] {
            drops.push(rate(row(&res.rows, Method::Cll), k) - rate(row(&res.rows, Method::CllDrop11), k));
        }
    }
    let mean = drops.iter().sum::<f64>() / drops.len() as f64;
    assert!(mean < 0.15, "mean power drop {mean}: {drops:?}");

    let mut cfg = ScenarioConfig::standard(1, 0.3, 0.05).unwrap();
    cfg.methods = vec![Method::Cll, Method::CllDrop11];
    cfg.ascertainment.target_cases = 1000;
    cfg.ascertainment.target_controls = 1000;
    cfg.replicates = 200;
    cfg.base_seed = 4004;
    let res = run_scenario(&cfg).unwrap();
    for k in [HypothesisKind::Association, HypothesisKind::Maternal] {
        let (a, b) = (rate(row(&res.rows, Method::Cll), k), rate(row(&res.rows, Method::CllDrop11), k));
        assert!((a - b).abs() < 0.06, "{k}: {a} vs {b}");
    }
}

fn mean_abs_risk_bias(r: &MetricsRow) -> f64 {
    let v: Vec<f64> = [Param::R1, Param::R2, Param::S1, Param::S2].iter().map(|p| r.bias_median[p.index()].unwrap().abs()).collect();
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn cll_bias_grows_with_prevalence() {
    let mut bias = Vec::new();
    for prev in [0.05, 0.15] {
        let mut cfg = ScenarioConfig::standard(4, 0.3, prev).unwrap();
        cfg.methods = vec![Method::Cll];
        cfg.ascertainment.target_cases = 1000;
        cfg.ascertainment.target_controls = 1000;
        cfg.replicates = 100;
        cfg.base_seed = 4005;
        let res = run_scenario(&cfg).unwrap();
        bias.push(mean_abs_risk_bias(&res.rows[0]));
    }
    assert!(bias[1] > bias[0], "{bias:?}");
}

#[test]
fn rare_disease_prevalence_misspecification() {
    let mut cfg = ScenarioConfig::standard(7, 0.3, 0.01).unwrap();
    cfg.replicates = 100;
    cfg.base_seed = 4006;
    let res = sensitivity_run(&cfg, &[0.2, 5.0, 0.8, 1.2]).unwrap();
    let worst = |m: f64| {
        res.comparisons
            .iter()
            .filter(|r| r.multiplier == m && r.parameter != Param::Delta)
            .map(|r| r.median_abs_rel_diff.unwrap())
            .fold(0.0, f64::max)
    };
    assert!(worst(0.8) < 0.05 && worst(1.2) < 0.05);
    assert!(worst(5.0) > worst(0.2), "x5 {} vs x0.2 {}", worst(5.0), worst(0.2));
}

#[test]
fn same_config_same_rows() {
    let mut cfg = ScenarioConfig::standard(3, 0.1, 0.15).unwrap();
    cfg.methods = Method::ALL.to_vec();
    cfg.replicates = 20;
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.records, b.records);
}
