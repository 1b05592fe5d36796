//! Interpretations: a translation plus statement templates, so that one
//! source statement may go to several target statements.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::replay::interpret_proof;
use super::translation::Translation;
use super::CombinatorError;
use crate::logic::derive::{derive, Budget, SearchStatus};
use crate::logic::formula::Statement;
use crate::logic::subst::Substitution;
use crate::logic::system::{check_derivation, DeductiveSystem, Derivation};

/// `ι(φ) = { T[x_i ↦ τ(φ_i)] : T ∈ templates }`, where `φ_i` are the parts
/// of `φ` and each template is a target statement over `x0 … x{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub translation: Translation,
    pub source_type: (usize, usize),
    pub templates: Vec<Statement>,
}

impl Interpretation {
    pub fn new(translation: Translation, source_type: (usize, usize), templates: Vec<Statement>) -> Result<Self, CombinatorError> {
        let k = (source_type.0 + source_type.1) as u32;
        if templates.is_empty() {
            return Err(CombinatorError::BadTranslation {
                reason: "an interpretation needs at least one template".into(),
            });
        }
        for t in &templates {
            translation.target().check_statement(t)?;
            if let Some(v) = t.vars().into_iter().find(|&v| v >= k) {
                return Err(CombinatorError::BadTranslation {
                    reason: format!("template {t} uses x{v}, but source statements have {k} parts"),
                });
            }
        }
        Ok(Interpretation {
            translation,
            source_type,
            templates,
        })
    }

    /// The template that copies every part across.
    pub fn pointwise(translation: Translation, ty: (usize, usize)) -> Self {
        let parts = (0..(ty.0 + ty.1) as u32).map(crate::logic::Formula::Var).collect();
        let template = Statement::new(ty, parts).expect("matching length");
        Interpretation {
            translation,
            source_type: ty,
            templates: vec![template],
        }
    }

    pub fn identity(system: &DeductiveSystem) -> Self {
        Interpretation::pointwise(Translation::identity(system.language()), system.statement_type())
    }

    pub fn target_type(&self) -> (usize, usize) {
        self.templates[0].ty
    }

    pub fn image(&self, s: &Statement) -> Vec<Statement> {
        let plug = Substitution::from_pairs(
            s.parts
                .iter()
                .enumerate()
                .map(|(i, f)| (i as u32, self.translation.apply_formula(f))),
        )
        .expect("statement parts fit in the variable universe");
        let mut out: Vec<Statement> = Vec::new();
        for t in &self.templates {
            let img = plug.apply(t);
            if !out.contains(&img) {
                out.push(img);
            }
        }
        out
    }

    /// `ι[Φ]`, without repeats, in order of first appearance.
    pub fn image_set(&self, phi: &[Statement]) -> Vec<Statement> {
        let mut out: Vec<Statement> = Vec::new();
        for s in phi {
            for img in self.image(s) {
                if !out.contains(&img) {
                    out.push(img);
                }
            }
        }
        out
    }

    /// `self` then `next`; templates of `next` are applied to every
    /// template image of `self`.
    pub fn then(&self, next: &Interpretation) -> Result<Interpretation, CombinatorError> {
        let translation = self.translation.then(&next.translation)?;
        if self.target_type() != next.source_type {
            return Err(CombinatorError::TypeMismatch {
                expected: next.source_type,
                found: self.target_type(),
            });
        }
        let mut templates: Vec<Statement> = Vec::new();
        for t in &self.templates {
            for s in next.image(t) {
                if !templates.contains(&s) {
                    templates.push(s);
                }
            }
        }
        Interpretation::new(translation, self.source_type, templates)
    }
}

/// `ι(σφ) = τ̄(σ)·ι(φ)` as sets.
pub fn check_action_invariance(iota: &Interpretation, sigma: &Substitution, phi: &Statement) -> Result<(), CombinatorError> {
    let lhs: BTreeSet<Statement> = iota.image(&sigma.apply(phi)).into_iter().collect();
    let moved = iota.translation.transport(sigma);
    let rhs: BTreeSet<Statement> = iota.image(phi).iter().map(|s| moved.apply(s)).collect();
    if lhs == rhs {
        Ok(())
    } else {
        Err(CombinatorError::ActionInvarianceViolation {
            sigma: sigma.to_string(),
            statement: phi.to_string(),
        })
    }
}

/// An entailment `premises ⊢ goal` of the source system, optionally with a
/// proof of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub premises: Vec<Statement>,
    pub goal: Statement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Derivation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// A bounded search finished without finding what was needed.
    Fail,
    /// A search ran out of nodes.
    Inconclusive,
}

impl Verdict {
    fn meet(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub entry: usize,
    /// `Φ ⊢ ψ` implies `ι[Φ] ⊢ ι(ψ)`.
    pub forward: Verdict,
    /// How the forward direction was settled: `proof`, `search` or `none`.
    pub method: String,
    /// `ι[Φ] ⊢ ι(ψ)` implies `Φ ⊢ ψ`; `None` when the target entailment was
    /// not established.
    pub conservative: Option<Verdict>,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpretationReport {
    pub invariance_checks: usize,
    pub forward: Verdict,
    pub conservative: Verdict,
    pub entries: Vec<EntryReport>,
}

fn search_all(system: &DeductiveSystem, premises: &[Statement], goals: &[Statement], budget: Budget) -> Result<Verdict, CombinatorError> {
    let mut verdict = Verdict::Pass;
    for g in goals {
        let r = derive(system, premises, g, budget)?;
        verdict = verdict.meet(match r.status {
            SearchStatus::Found => Verdict::Pass,
            SearchStatus::NotFoundWithinBudget => Verdict::Fail,
            SearchStatus::BudgetExceeded => Verdict::Inconclusive,
        });
    }
    Ok(verdict)
}

/// Checks `ι : S → T` on a suite of source entailments.
///
/// Action invariance is checked for every supplied substitution on every
/// statement of the suite and is a hard error. The forward direction uses
/// the supplied proof when there is one and search otherwise. Conservativity
/// is sampled: whenever the target entailment holds, the source entailment
/// is searched for; success is only ever success within the budget.
pub fn check_interpretation(
    iota: &Interpretation,
    source: &DeductiveSystem,
    target: &DeductiveSystem,
    suite: &[SuiteEntry],
    substitutions: &[Substitution],
    budget: Budget,
) -> Result<InterpretationReport, CombinatorError> {
    if iota.source_type != source.statement_type() {
        return Err(CombinatorError::TypeMismatch {
            expected: source.statement_type(),
            found: iota.source_type,
        });
    }
    if iota.target_type() != target.statement_type() {
        return Err(CombinatorError::TypeMismatch {
            expected: target.statement_type(),
            found: iota.target_type(),
        });
    }
    if iota.translation.source() != source.language() || iota.translation.target() != target.language() {
        return Err(CombinatorError::FragmentMismatch {
            reason: "translation languages differ from the systems".into(),
        });
    }
    let mut invariance_checks = 0;
    let mut entries = Vec::new();
    for (n, e) in suite.iter().enumerate() {
        for s in e.premises.iter().chain(std::iter::once(&e.goal)) {
            source.check_statement(s)?;
            for sigma in substitutions {
                check_action_invariance(iota, sigma, s)?;
                invariance_checks += 1;
            }
        }
        let images = iota.image_set(&e.premises);
        let goals = iota.image(&e.goal);
        let mut method = "search";
        let mut forward = None;
        if let Some(d) = &e.derivation {
            check_derivation(source, &e.premises, d)?;
            if let Ok(p) = interpret_proof(d, source, &e.premises, target, iota, budget) {
                check_derivation(target, &images, &p)?;
                if goals.iter().all(|g| p.statements().any(|s| s == g)) {
                    method = "proof";
                    forward = Some(Verdict::Pass);
                }
            }
        }
        let forward = match forward {
            Some(v) => v,
            None => search_all(target, &images, &goals, budget)?,
        };
        let mut witness = None;
        let conservative = if forward == Verdict::Pass {
            let v = if e.derivation.is_some() {
                Verdict::Pass
            } else {
                search_all(source, &e.premises, std::slice::from_ref(&e.goal), budget)?
            };
            if v != Verdict::Pass {
                witness = Some(format!(
                    "target derives the image of {} but the source search gave {v:?}",
                    e.goal
                ));
            }
            Some(v)
        } else {
            witness = Some(format!("image of {} not derived in the target ({forward:?})", e.goal));
            if e.derivation.is_none() {
                method = "none";
            }
            None
        };
        entries.push(EntryReport {
            entry: n,
            forward,
            method: method.to_string(),
            conservative,
            witness,
        });
    }
    let forward = entries.iter().fold(Verdict::Pass, |v, e| v.meet(e.forward));
    let conservative = entries
        .iter()
        .filter_map(|e| e.conservative)
        .fold(Verdict::Pass, |v, c| v.meet(if c == Verdict::Fail { Verdict::Inconclusive } else { c }));
    Ok(InterpretationReport {
        invariance_checks,
        forward,
        conservative,
        entries,
    })
}
