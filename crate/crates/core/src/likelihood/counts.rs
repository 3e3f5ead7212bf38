use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{collapse_triad, PairType, Status, TriadType, EXCLUDED_PAIR, PAIR_TYPES, TRIAD_TYPES};

/// Observed family counts in canonical type order. Design totals are the
/// sums of the corresponding cell vectors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountsTable {
    pub n1_triad: [u64; 15],
    pub n0_triad: [u64; 15],
    pub n1_pair: [u64; 7],
    pub n0_pair: [u64; 7],
}

impl CountsTable {
    pub fn new(n1_triad: [u64; 15], n0_triad: [u64; 15], n1_pair: [u64; 7], n0_pair: [u64; 7]) -> Self {
        Self { n1_triad, n0_triad, n1_pair, n0_pair }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn add_triad(&mut self, t: &TriadType, d: Status) {
        match d {
            Status::Case => self.n1_triad[t.index - 1] += 1,
            Status::Control => self.n0_triad[t.index - 1] += 1,
        }
    }

    pub fn add_pair(&mut self, p: &PairType, d: Status) {
        match d {
            Status::Case => self.n1_pair[p.index - 1] += 1,
            Status::Control => self.n0_pair[p.index - 1] += 1,
        }
    }

    /// N_t^1
    pub fn triad_cases(&self) -> u64 {
        self.n1_triad.iter().sum()
    }

    /// N_t^0
    pub fn triad_controls(&self) -> u64 {
        self.n0_triad.iter().sum()
    }

    /// N_p^1
    pub fn pair_cases(&self) -> u64 {
        self.n1_pair.iter().sum()
    }

    /// N_p^0
    pub fn pair_controls(&self) -> u64 {
        self.n0_pair.iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.triad_cases() + self.triad_controls() + self.pair_cases() + self.pair_controls()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Counts of the excluded heterozygous mother / heterozygous child pair
    /// as (cases, controls).
    pub fn excluded_pair_counts(&self) -> (u64, u64) {
        (self.n1_pair[EXCLUDED_PAIR], self.n0_pair[EXCLUDED_PAIR])
    }

    /// Every family reduced to a mother-child pair (all fathers ignored).
    pub fn collapse_to_pairs(&self) -> Self {
        let mut out = Self { n1_pair: self.n1_pair, n0_pair: self.n0_pair, ..Self::default() };
        for t in TRIAD_TYPES.iter() {
            let p = collapse_triad(t).index - 1;
            out.n1_pair[p] += self.n1_triad[t.index - 1];
            out.n0_pair[p] += self.n0_triad[t.index - 1];
        }
        out
    }

    /// Canonical `key -> count` rows, e.g. `triad_case_8`, `pair_control_0_0`,
    /// followed by the four design totals.
    pub fn to_rows(&self) -> Vec<(String, u64)> {
        let mut rows = Vec::with_capacity(48);
        for (label, cells) in [("triad_case", &self.n1_triad), ("triad_control", &self.n0_triad)] {
            for t in TRIAD_TYPES.iter() {
                rows.push((format!("{label}_{}", t.index), cells[t.index - 1]));
            }
        }
        for (label, cells) in [("pair_case", &self.n1_pair), ("pair_control", &self.n0_pair)] {
            for p in PAIR_TYPES.iter() {
                rows.push((format!("{label}_{}_{}", p.m, p.c), cells[p.index - 1]));
            }
        }
        rows.push(("total_triad_case".into(), self.triad_cases()));
        rows.push(("total_triad_control".into(), self.triad_controls()));
        rows.push(("total_pair_case".into(), self.pair_cases()));
        rows.push(("total_pair_control".into(), self.pair_controls()));
        rows
    }

    /// Two-column `key,value` text with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("key,value\n");
        for (k, v) in self.to_rows() {
            writeln!(s, "{k},{v}").unwrap();
        }
        s
    }

    /// Parses the output of [`to_csv`](Self::to_csv). Unknown keys, bad
    /// numbers and totals that disagree with the cells are errors.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut values: BTreeMap<String, u64> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || (lineno == 0 && line == "key,value") {
                continue;
            }
            let (key, value) = line
                .split_once(',')
                .ok_or_else(|| Error::InvalidCounts(format!("line {}: expected key,value", lineno + 1)))?;
            let value: u64 = value.trim().parse().map_err(|_| {
                Error::InvalidCounts(format!("line {}: `{}` is not a non-negative integer", lineno + 1, value.trim()))
            })?;
            if values.insert(key.trim().to_string(), value).is_some() {
                return Err(Error::InvalidCounts(format!("line {}: duplicate key `{}`", lineno + 1, key.trim())));
            }
        }
        let mut table = Self::default();
        let known: Vec<(String, u64)> = table.to_rows();
        for (key, _) in &known {
            if key.starts_with("total_") {
                continue;
            }
            let v = values.get(key).copied().unwrap_or(0);
            table.set_by_key(key, v);
        }
        for key in values.keys() {
            if !known.iter().any(|(k, _)| k == key) {
                return Err(Error::InvalidCounts(format!("unknown key `{key}`")));
            }
        }
        for (key, expected) in table.to_rows().into_iter().filter(|(k, _)| k.starts_with("total_")) {
            if let Some(&given) = values.get(&key) {
                if given != expected {
                    return Err(Error::InvalidCounts(format!(
                        "{key} = {given} but the cells sum to {expected}"
                    )));
                }
            }
        }
        Ok(table)
    }

    fn set_by_key(&mut self, key: &str, v: u64) {
        let parts: Vec<&str> = key.split('_').collect();
        match parts.as_slice() {
            ["triad", "case", i] => self.n1_triad[i.parse::<usize>().unwrap() - 1] = v,
            ["triad", "control", i] => self.n0_triad[i.parse::<usize>().unwrap() - 1] = v,
            ["pair", status, m, c] => {
                let idx = PAIR_TYPES
                    .iter()
                    .position(|p| p.m.to_string() == *m && p.c.to_string() == *c)
                    .unwrap();
                if *status == "case" {
                    self.n1_pair[idx] = v
                } else {
                    self.n0_pair[idx] = v
                }
            }
            _ => unreachable!("canonical key {key}"),
        }
    }
}
