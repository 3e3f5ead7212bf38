//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use lime::model::{MatingTypeDistribution, RelativeRisks, RiskParameters};
use rand::Rng;

/// Penetrance written out directly from the multiplicative model.
pub fn oracle_penetrance(x: &[f64; 6], m: usize, c: usize, maternal: bool) -> f64 {
    let [delta, r1, r2, rim, s1, s2] = *x;
    let mut p = delta;
    if c == 1 {
        p *= r1;
        if maternal {
            p *= rim;
        }
    }
    if c == 2 {
        p *= r2;
    }
    if m == 1 {
        p *= s1;
    }
    if m == 2 {
        p *= s2;
    }
    p
}

/// P(D = d, M = m, F = f, C = c) for every (m, f, c) by enumerating the
/// transmitted alleles of each parent. Indexed `[d][m][f][c]`.
pub fn oracle_joint(x: &[f64; 6], mu: &[[f64; 3]; 3]) -> [[[[f64; 3]; 3]; 3]; 2] {
    let mut out = [[[[0.0; 3]; 3]; 3]; 2];
    let allele_prob = |g: usize, a: usize| match (g, a) {
        (0, 0) | (2, 1) => 1.0,
        (1, _) => 0.5,
        _ => 0.0,
    };
    for m in 0..3 {
        for f in 0..3 {
            for am in 0..2 {
                for af in 0..2 {
                    let w = mu[m][f] * allele_prob(m, am) * allele_prob(f, af);
                    if w == 0.0 {
                        continue;
                    }
                    let c = am + af;
                    let pen = oracle_penetrance(x, m, c, c == 1 && am == 1);
                    out[1][m][f][c] += w * pen;
                    out[0][m][f][c] += w * (1.0 - pen);
                }
            }
        }
    }
    out
}

/// Random relative risks on [1/4, 4] (log scale) with a phenocopy rate
/// drawn below the feasibility limit.
pub fn random_params<R: Rng>(rng: &mut R) -> RiskParameters<f64> {
    let mut r = [0.0; 5];
    for v in r.iter_mut() {
        *v = (rng.random_range(-1.0..1.0) * 4f64.ln()).exp();
    }
    let risks = RelativeRisks::new(r[0], r[1], r[2], r[3], r[4]).unwrap();
    let worst = [
        1.0,
        r[0],
        r[0] * r[2],
        r[1],
        r[3],
        r[3] * r[0],
        r[3] * r[0] * r[2],
        r[3] * r[1],
        r[4] * r[0],
        r[4] * r[0] * r[2],
        r[4] * r[1],
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let delta = rng.random_range(0.001..0.99) / worst;
    RiskParameters::new(delta, risks).unwrap()
}

pub fn random_mating<R: Rng>(rng: &mut R) -> MatingTypeDistribution<f64> {
    let mut mu = [[0.0; 3]; 3];
    for row in mu.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.random_range(0.01..1.0);
        }
    }
    let s: f64 = mu.iter().flatten().sum();
    for row in mu.iter_mut() {
        for v in row.iter_mut() {
            *v /= s;
        }
    }
    MatingTypeDistribution::new(mu).unwrap()
}

pub fn hwe(p: f64) -> [f64; 3] {
    [(1.0 - p) * (1.0 - p), 2.0 * p * (1.0 - p), p * p]
}

/// One result line in a uniform format.
pub fn report(name: &str, pass: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}
