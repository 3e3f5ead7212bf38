use thiserror::Error;

use crate::model::Origin;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid genotype score {0}; expected 0, 1 or 2")]
    InvalidGenotype(i64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "infeasible risk parameters: penetrance {penetrance} >= 1 at mother={mother}, child={child}{}",
        origin_suffix(*origin)
    )]
    Infeasible {
        mother: u8,
        child: u8,
        origin: Option<Origin>,
        penetrance: f64,
    },

    #[error("invalid mating-type distribution: {0}")]
    InvalidMating(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid counts table: {0}")]
    InvalidCounts(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("record {id}: {reason}")]
    Data { id: u64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn origin_suffix(origin: Option<Origin>) -> String {
    match origin {
        Some(o) => format!(", origin={o}"),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
