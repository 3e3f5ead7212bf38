use std::fmt::Write as _;

use super::FamilyRecord;
use crate::error::{Error, Result};
use crate::model::{GenotypeScore, Status};

const HEADER: &str = "family_id,m,f,c,d";

/// One family per line; the father's column is empty when missing.
pub fn write_dataset_csv(records: &[FamilyRecord]) -> String {
    let mut s = String::with_capacity(16 * (records.len() + 1));
    s.push_str(HEADER);
    s.push('\n');
    for r in records {
        let f = r.f.map(|g| g.to_string()).unwrap_or_default();
        writeln!(s, "{},{},{},{},{}", r.id, r.m, f, r.c, r.d.is_case() as u8).unwrap();
    }
    s
}

fn genotype(field: &str, line: usize) -> Result<GenotypeScore> {
    let v: u8 = field
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("line {line}: `{field}` is not a genotype score")))?;
    GenotypeScore::new(v).map_err(|e| Error::Config(format!("line {line}: {e}")))
}

/// Parses [`write_dataset_csv`] output. Allele origins are not recorded, so
/// they come back as `None`.
pub fn parse_dataset_csv(text: &str) -> Result<Vec<FamilyRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() || (i == 0 && row == HEADER) {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        let [id, m, f, c, d] = fields.as_slice() else {
            return Err(Error::Config(format!("line {line}: expected 5 fields, found {}", fields.len())));
        };
        let id: u64 = id.trim().parse().map_err(|_| Error::Config(format!("line {line}: bad family id `{id}`")))?;
        let f = if f.trim().is_empty() { None } else { Some(genotype(f, line)?) };
        let d = match d.trim() {
            "0" => Status::Control,
            "1" => Status::Case,
            other => return Err(Error::Config(format!("line {line}: disease status `{other}` is not 0 or 1"))),
        };
        out.push(FamilyRecord { id, m: genotype(m, line)?, f, c: genotype(c, line)?, d, origin: None });
    }
    Ok(out)
}
