//! Quotients by saturation, tensor products, products and pushouts of
//! modules, and colimits in the category of quantale-module pairs.

use serde::Serialize;
use thiserror::Error;

use crate::module::ModuleError;
use crate::order::LatticeError;
use crate::quantale::QuantaleError;

pub mod product;
pub mod pushout;
pub mod qm;
pub mod saturation;
pub mod tensor;

pub use product::{module_product, ModuleProduct};
pub use pushout::{module_pushout, ModulePushout};
pub use qm::{
    qm_check, qm_compose, qm_coproduct, qm_pushout, QMCoproduct, QMMorphism, QMObject, QMPushout,
};
pub use saturation::{saturated_elements, Saturation};
pub use tensor::{
    extend_scalars, induced_tensor_hom, tensor_product, tensor_unit_embedding, TensorResult,
};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum ConstructionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("size {size} exceeds the bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("ill-formed inputs: {reason}")]
    IllFormedInputs { reason: String },
    #[error("relation pair {index} references elements outside the module")]
    BadRelation { index: usize },
    #[error("witness map is not injective at {x} and {y}")]
    WitnessNotInjective { x: usize, y: usize },
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("second component does not land in the restricted target: {source}")]
    TargetNotRestricted { source: ModuleError },
    #[error("supplied quantale is not a coproduct for target {target}: {detail}")]
    NotACoproductWitness { target: usize, detail: String },
    #[error("supplied square is not a pushout for target {target}: {detail}")]
    NotAPushoutWitness { target: usize, detail: String },
    #[error("embedding witness {index} is missing or invalid: {detail}")]
    MissingEmbeddingWitness { index: usize, detail: String },
}

/// Outcome of checking a universal property against one target: every
/// cone or cocone should have exactly one mediating morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalCheck {
    pub target: usize,
    pub cones: usize,
    pub missing: usize,
    pub duplicated: usize,
}

impl UniversalCheck {
    pub fn holds(&self) -> bool {
        self.missing == 0 && self.duplicated == 0
    }
}

pub(crate) fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for list in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |item| {
                    let mut next = prefix.clone();
                    next.push(item.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// Counts how many mediating candidates induce each cone, then compares
/// against the full list of cones.
pub(crate) fn tally<K: std::hash::Hash + Eq>(
    target: usize,
    induced: impl IntoIterator<Item = K>,
    cones: impl IntoIterator<Item = K>,
) -> UniversalCheck {
    let mut counts: std::collections::HashMap<K, usize> = std::collections::HashMap::new();
    for key in induced {
        *counts.entry(key).or_default() += 1;
    }
    let mut check = UniversalCheck {
        target,
        cones: 0,
        missing: 0,
        duplicated: 0,
    };
    for cone in cones {
        check.cones += 1;
        match counts.get(&cone).copied().unwrap_or(0) {
            0 => check.missing += 1,
            1 => {}
            _ => check.duplicated += 1,
        }
    }
    check
}
