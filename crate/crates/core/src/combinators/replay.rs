//! Carrying a derivation across an interpretation.
//!
//! Each axiom or rule of the source gets one lemma: a target derivation of
//! `ι(conclusion)` from `ι[premises]`, found by search once and cached.
//! A step instantiated by `σ` is replayed as that lemma moved by `τ̄(σ)`,
//! whose leaves are then images of earlier steps.

use std::collections::HashMap;

use super::interpretation::Interpretation;
use super::CombinatorError;
use crate::logic::derive::{derive, Budget};
use crate::logic::formula::Statement;
use crate::logic::system::{check_derivation, DeductiveSystem, Derivation, Justification, Rule, Step};

struct Splicer {
    steps: Vec<Step>,
    seen: HashMap<Statement, usize>,
}

impl Splicer {
    fn push(&mut self, step: Step) -> usize {
        if let Some(&i) = self.seen.get(&step.statement) {
            return i;
        }
        self.seen.insert(step.statement.clone(), self.steps.len());
        self.steps.push(step);
        self.steps.len() - 1
    }

    /// Appends `lemma`, whose premise leaves must already be present.
    fn splice(&mut self, lemma: &Derivation, at: usize) -> Result<(), CombinatorError> {
        let mut map = Vec::with_capacity(lemma.len());
        for s in &lemma.steps {
            let j = match &s.justification {
                Justification::Premise => *self.seen.get(&s.statement).ok_or_else(|| CombinatorError::StepNotInterpretable {
                    index: at,
                    reason: format!("lemma leaf {} is not the image of an earlier step", s.statement),
                })?,
                Justification::Axiom { .. } => self.push(s.clone()),
                Justification::Rule { index, subst, premises } => self.push(Step {
                    statement: s.statement.clone(),
                    justification: Justification::Rule {
                        index: *index,
                        subst: subst.clone(),
                        premises: premises.iter().map(|&p| map[p]).collect(),
                    },
                }),
            };
            map.push(j);
        }
        Ok(())
    }
}

fn lemma(
    rule: &Rule,
    target: &DeductiveSystem,
    iota: &Interpretation,
    budget: Budget,
    at: usize,
) -> Result<Vec<Derivation>, CombinatorError> {
    let premises = iota.image_set(&rule.premises);
    let mut out = Vec::new();
    for goal in iota.image(&rule.conclusion) {
        let r = derive(target, &premises, &goal, budget)?;
        match r.derivation {
            Some(d) => out.push(d),
            None => {
                return Err(CombinatorError::StepNotInterpretable {
                    index: at,
                    reason: format!("no target derivation of {goal} from the images of the rule premises ({:?})", r.status),
                })
            }
        }
    }
    Ok(out)
}

/// A derivation of every statement of `ι(conclusion of d)` from `ι[Φ]` in
/// `target`, given a derivation `d` from `Φ` in `source`.
pub fn interpret_proof(
    d: &Derivation,
    source: &DeductiveSystem,
    premises: &[Statement],
    target: &DeductiveSystem,
    iota: &Interpretation,
    budget: Budget,
) -> Result<Derivation, CombinatorError> {
    if let Err(e) = check_derivation(source, premises, d) {
        let index = match e {
            crate::logic::LogicError::BadStep { index, .. } => index,
            _ => 0,
        };
        return Err(CombinatorError::StepNotInterpretable {
            index,
            reason: e.to_string(),
        });
    }
    let axioms: Vec<Rule> = source.axioms().iter().cloned().map(Rule::axiom).collect();
    let mut cache: HashMap<(bool, usize), Vec<Derivation>> = HashMap::new();
    let mut out = Splicer {
        steps: Vec::new(),
        seen: HashMap::new(),
    };
    for (i, step) in d.steps.iter().enumerate() {
        let (key, subst) = match &step.justification {
            Justification::Premise => {
                for img in iota.image(&step.statement) {
                    out.push(Step {
                        statement: img,
                        justification: Justification::Premise,
                    });
                }
                continue;
            }
            Justification::Axiom { index, subst } => ((true, *index), subst),
            Justification::Rule { index, subst, .. } => ((false, *index), subst),
        };
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            let rule = if key.0 { &axioms[key.1] } else { &source.rules()[key.1] };
            e.insert(lemma(rule, target, iota, budget, i)?);
        }
        let moved = iota.translation.transport(subst);
        for l in &cache[&key] {
            out.splice(&l.substitute(&moved), i)?;
        }
    }
    // end on an image of the conclusion
    let goals = iota.image(d.conclusion().expect("checked non-empty"));
    let last = goals.last().expect("at least one template");
    if out.steps.last().map(|s| &s.statement) != Some(last) {
        let at = out.seen[last];
        let copy = out.steps[at].clone();
        out.steps.push(copy);
    }
    let result = Derivation { steps: out.steps };
    check_derivation(target, &iota.image_set(premises), &result).map_err(|e| CombinatorError::StepNotInterpretable {
        index: d.len() - 1,
        reason: format!("replayed derivation does not check: {e}"),
    })?;
    Ok(result)
}
