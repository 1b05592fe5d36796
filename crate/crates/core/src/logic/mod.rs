//! Propositional languages, deductive systems, bounded proof search and the
//! closure operator of a consequence relation on a finite universe.

use serde::Serialize;
use thiserror::Error;

pub mod cpl;
pub mod derive;
pub mod formula;
pub mod nucleus;
pub mod parse;
pub mod random;
pub mod subst;
pub mod system;

pub use derive::{derive, Budget, SearchReport, SearchStatus};
pub use formula::{Connective, Formula, Language, Statement, FORMULA_TYPE, VAR_UNIVERSE};
pub use nucleus::{formula_universe, BoundedNucleus, Universe};
pub use parse::{parse_formula, parse_statement};
pub use subst::Substitution;
pub use system::{check_derivation, check_derivation_of, directly_derivable, DeductiveSystem, Derivation};
pub use system::{Justification, Rule, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum LogicError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown connective {name}")]
    UnknownConnective { name: String },
    #[error("{name} takes {expected} arguments, got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("variable x{index} outside x0..x15")]
    VariableOutOfRange { index: u32 },
    #[error("connective {name} declared twice")]
    DuplicateConnective { name: String },
    #[error("{name} is not a valid connective name")]
    BadName { name: String },
    #[error("expected a statement of type {expected:?}, got {found} formulas")]
    TypeMismatch { expected: (usize, usize), found: usize },
    #[error("step {index}: {reason}")]
    BadStep { index: usize, reason: String },
    #[error("universe of {size} statements exceeds {bound}")]
    UniverseTooLarge { size: usize, bound: usize },
    #[error("search budget exhausted while closing {statement}")]
    BudgetExceeded { statement: String },
}
