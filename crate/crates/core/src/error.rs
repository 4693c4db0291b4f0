use thiserror::Error;

use crate::automaton::{StateId, ValidationReport};
use crate::textio::ParseDiagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid letter `{0}`")]
    InvalidLetter(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("unknown state `{0}`")]
    UnknownState(StateId),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("state `{0}` occurs in both operands")]
    NonDisjoint(StateId),
    #[error("device `{0}` is not bound")]
    UnboundDevice(String),
    #[error("device `{0}` is already bound")]
    DuplicateDevice(String),
    #[error("invalid automaton: {0}")]
    Invalid(ValidationReport),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("enumeration length {requested} exceeds the bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("{}", render_diagnostics(.0))]
    Parse(Vec<ParseDiagnostic>),
}

fn render_diagnostics(diagnostics: &[ParseDiagnostic]) -> String {
    diagnostics
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}
