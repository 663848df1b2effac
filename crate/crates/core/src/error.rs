use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("state index {0} out of range")]
    StateOutOfRange(usize),

    #[error("action index {0} out of range")]
    ActionOutOfRange(usize),

    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("letter does not cover state {state} of the cell")]
    LetterNotTotal { state: usize },

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("cell of {size} states exceeds the brute-force limit of {limit}")]
    OracleScope { size: usize, limit: usize },

    #[error("witness rejected: {0}")]
    InvalidWitness(String),

    #[error("model is not deterministic")]
    NotDeterministic,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
