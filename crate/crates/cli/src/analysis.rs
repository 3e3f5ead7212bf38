//! Fits and tests on a counts table for every method, reduced to one report
//! shape.

use lime::baselines::{cll_drop_11, cll_fit, cll_test, ll_lrt_fit, ll_lrt_test, BaselineFit, BaselineOptions, BaselineTest, CllVariant};
use lime::experiments::Method;
use lime::likelihood::{fit, test_hypotheses, CountsTable, FitOptions, FitResult, Hypothesis, TestResult};
use lime::model::Param;
use lime::{Error, HypothesisKind, Result, Sidedness};
use serde_json::{json, Map, Value};

use crate::format::sig6;

pub struct FitSummary {
    pub loglik: f64,
    pub converged: bool,
    pub estimates: Vec<(Param, f64)>,
    pub at_boundary: Vec<Param>,
}

pub struct TestSummary {
    pub kind: HypothesisKind,
    pub sidedness: Sidedness,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

pub struct Report {
    pub method: Method,
    pub prevalence: f64,
    pub counts: CountsTable,
    pub excluded_cells: Vec<String>,
    pub notes: Vec<String>,
    pub fit: FitSummary,
    pub tests: Vec<TestSummary>,
}

fn from_lime(f: &FitResult) -> FitSummary {
    FitSummary {
        loglik: f.loglik,
        converged: f.converged,
        estimates: f.free.iter().map(|p| (p, f.estimates.get(p))).collect(),
        at_boundary: f.at_boundary.clone(),
    }
}

/// Baseline estimates: the implied phenocopy rate when there is one, then
/// the free relative risks.
fn from_baseline(f: &BaselineFit) -> FitSummary {
    let mut estimates: Vec<(Param, f64)> = f.delta.map(|d| (Param::Delta, d)).into_iter().collect();
    estimates.extend(f.free.iter().filter(|&p| p != Param::Delta).map(|p| (p, f.risks.get(p))));
    FitSummary { loglik: f.loglik, converged: f.converged, estimates, at_boundary: f.at_boundary.clone() }
}

fn lime_test(t: &TestResult) -> TestSummary {
    TestSummary { kind: t.hypothesis.kind, sidedness: t.hypothesis.sidedness, statistic: t.statistic, df: t.df, p_value: t.p_value }
}

fn baseline_test(t: &BaselineTest) -> TestSummary {
    TestSummary { kind: t.hypothesis.kind, sidedness: t.hypothesis.sidedness, statistic: t.statistic, df: t.df, p_value: t.p_value }
}

/// The data view each method analyzes, with notes on what was set aside.
fn view(counts: &CountsTable, method: Method) -> (CountsTable, Vec<String>) {
    let mut notes = Vec::new();
    let triads = counts.triad_cases() + counts.triad_controls();
    let data = match method {
        Method::LimeMix => *counts,
        Method::LimePair | Method::Cll | Method::CllDrop11 => {
            if triads > 0 {
                notes.push(format!("{triads} triads analyzed as mother-child pairs (fathers ignored)"));
            }
            counts.collapse_to_pairs()
        }
        Method::LlLrt => {
            let unused = counts.total() - counts.triad_cases();
            if unused > 0 {
                notes.push(format!("{unused} control triads and mother-child pairs are not used by ll-lrt"));
            }
            *counts
        }
    };
    let (n1, n0) = data.excluded_pair_counts();
    if matches!(method, Method::LimeMix | Method::LimePair | Method::CllDrop11) && n1 + n0 > 0 {
        notes.push(format!(
            "{} (1,1) mother-child pairs ({n1} cases, {n0} controls) carry no likelihood term and are excluded",
            n1 + n0
        ));
    }
    (data, notes)
}

fn excluded(data: &CountsTable, method: Method) -> Vec<String> {
    match method {
        Method::LimeMix | Method::LimePair => lime::likelihood::excluded_cells(data),
        _ => Vec::new(),
    }
}

fn lime_options(method: Method) -> FitOptions {
    if method == Method::LimePair {
        FitOptions::pair_only()
    } else {
        FitOptions::default()
    }
}

pub fn fit_report(counts: &CountsTable, prevalence: f64, method: Method) -> Result<Report> {
    let (data, notes) = view(counts, method);
    let opts = BaselineOptions::default();
    let summary = match method {
        Method::LimeMix | Method::LimePair => from_lime(&fit(&data, prevalence, None, &lime_options(method))?),
        Method::LlLrt => from_baseline(&ll_lrt_fit(&data.n1_triad, None, &opts)?),
        Method::Cll => from_baseline(&cll_fit(&data, prevalence, None, &opts)?),
        Method::CllDrop11 => from_baseline(&cll_drop_11(&data, prevalence, None, &opts)?),
    };
    Ok(Report { method, prevalence, excluded_cells: excluded(&data, method), counts: *counts, notes, fit: summary, tests: Vec::new() })
}

pub fn test_report(
    counts: &CountsTable,
    prevalence: f64,
    method: Method,
    kinds: &[HypothesisKind],
    sidedness: Sidedness,
) -> Result<Report> {
    let (data, mut notes) = view(counts, method);
    let pairs_only = matches!(method, Method::LimePair | Method::Cll | Method::CllDrop11);
    let mut kinds = kinds.to_vec();
    if pairs_only && kinds.contains(&HypothesisKind::Imprinting) {
        if kinds.len() == 1 {
            return Err(Error::Config(format!("{method} fixes R_im = 1 and cannot test imprinting")));
        }
        kinds.retain(|&k| k != HypothesisKind::Imprinting);
        notes.push(format!("imprinting is not tested by {method}"));
    }
    if sidedness != Sidedness::Two && !kinds.contains(&HypothesisKind::Imprinting) {
        return Err(Error::Config("--sided applies only to the imprinting test".into()));
    }
    let hyps: Vec<Hypothesis> = kinds
        .iter()
        .map(|&k| if k == HypothesisKind::Imprinting { Hypothesis { kind: k, sidedness } } else { Hypothesis::two_sided(k) })
        .collect();
    let opts = BaselineOptions::default();
    let (summary, tests) = match method {
        Method::LimeMix | Method::LimePair => {
            let r = test_hypotheses(&data, prevalence, &hyps, &lime_options(method))?;
            (from_lime(&r[0].full), r.iter().map(lime_test).collect())
        }
        Method::LlLrt => {
            let r = ll_lrt_test(&data.n1_triad, &hyps, &opts)?;
            (from_baseline(&r[0].full), r.iter().map(baseline_test).collect())
        }
        Method::Cll | Method::CllDrop11 => {
            let variant = if method == Method::Cll { CllVariant::Full } else { CllVariant::Drop11 };
            let r = cll_test(&data, prevalence, &hyps, variant, &opts)?;
            (from_baseline(&r[0].full), r.iter().map(baseline_test).collect())
        }
    };
    Ok(Report { method, prevalence, excluded_cells: excluded(&data, method), counts: *counts, notes, fit: summary, tests })
}

impl Report {
    pub fn to_json(&self) -> Value {
        let estimates: Map<String, Value> = self.fit.estimates.iter().map(|(p, v)| (p.name().to_string(), json!(v))).collect();
        let tests: Vec<Value> = self
            .tests
            .iter()
            .map(|t| {
                json!({
                    "hypothesis": t.kind.name(),
                    "sided": t.sidedness,
                    "statistic": t.statistic,
                    "df": t.df,
                    "p_value": t.p_value,
                })
            })
            .collect();
        json!({
            "method": self.method,
            "prevalence": self.prevalence,
            "families": {
                "triad_cases": self.counts.triad_cases(),
                "triad_controls": self.counts.triad_controls(),
                "pair_cases": self.counts.pair_cases(),
                "pair_controls": self.counts.pair_controls(),
            },
            "loglik": self.fit.loglik,
            "converged": self.fit.converged,
            "estimates": estimates,
            "at_boundary": self.fit.at_boundary.iter().map(|p| p.name()).collect::<Vec<_>>(),
            "excluded_cells": self.excluded_cells,
            "tests": tests,
            "notes": self.notes,
        })
    }

    pub fn to_table(&self) -> String {
        let c = &self.counts;
        let mut s = String::new();
        s += &format!("method      {}\n", self.method);
        s += &format!("prevalence  {}\n", sig6(self.prevalence));
        s += &format!(
            "families    triads {} cases / {} controls, pairs {} cases / {} controls\n",
            c.triad_cases(),
            c.triad_controls(),
            c.pair_cases(),
            c.pair_controls()
        );
        s += &format!("loglik      {}\n", sig6(self.fit.loglik));
        s += &format!("converged   {}\n\n", if self.fit.converged { "yes" } else { "no" });
        s += &format!("{:<10}  {:>12}\n", "parameter", "estimate");
        for (p, v) in &self.fit.estimates {
            let flag = if self.fit.at_boundary.contains(p) { "  (boundary)" } else { "" };
            s += &format!("{:<10}  {:>12}{flag}\n", p.name(), sig6(*v));
        }
        if !self.tests.is_empty() {
            s += &format!("\n{:<12}  {:<7}  {:>12}  {:>3}  {:>12}\n", "hypothesis", "sided", "statistic", "df", "p-value");
            for t in &self.tests {
                let sided = match t.sidedness {
                    Sidedness::Two => "two",
                    Sidedness::Greater => "greater",
                    Sidedness::Less => "less",
                };
                s += &format!(
                    "{:<12}  {:<7}  {:>12}  {:>3}  {:>12}\n",
                    t.kind.name(),
                    sided,
                    sig6(t.statistic),
                    t.df,
                    sig6(t.p_value)
                );
            }
        }
        if !self.excluded_cells.is_empty() {
            s += &format!("\nexcluded cells: {}\n", self.excluded_cells.join(", "));
        }
        for n in &self.notes {
            s += &format!("note: {n}\n");
        }
        s
    }
}
