//! Translations, interpretations, and the coproduct and amalgam of
//! deductive systems.

use serde::Serialize;
use thiserror::Error;

use crate::logic::LogicError;

pub mod amalgam;
pub mod coproduct;
pub mod interpretation;
pub mod replay;
pub mod translation;

pub use amalgam::{amalgamated_system, Amalgam, FragmentCheck};
pub use coproduct::{copairing, logical_coproduct, tag, LogicalCoproduct};
pub use interpretation::{check_action_invariance, check_interpretation, Interpretation, InterpretationReport, SuiteEntry, Verdict};
pub use replay::interpret_proof;
pub use translation::{check_translation_conditions, transport_substitution, Translation, TranslationReport, WitnessViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CombinatorError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("bad translation: {reason}")]
    BadTranslation { reason: String },
    #[error("statement types differ: expected {expected:?}, found {found:?}")]
    TypeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("fragment mismatch: {reason}")]
    FragmentMismatch { reason: String },
    #[error("r{map} is not conservative on suite entry {entry}: {detail}")]
    NonConservativeWitness { map: usize, entry: usize, detail: String },
    #[error("step {index} cannot be interpreted: {reason}")]
    StepNotInterpretable { index: usize, reason: String },
    #[error("interpretation is not invariant under {sigma} at {statement}")]
    ActionInvarianceViolation { sigma: String, statement: String },
}
