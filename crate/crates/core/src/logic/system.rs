//! Rules, deductive systems, derivations and the derivation checker.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::formula::{Language, Statement};
use super::subst::{binding_to_substitution, match_statement, Substitution};
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rule {
    pub premises: Vec<Statement>,
    pub conclusion: Statement,
}

impl Rule {
    pub fn axiom(conclusion: Statement) -> Self {
        Rule {
            premises: Vec::new(),
            conclusion,
        }
    }

    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    pub fn connectives(&self) -> BTreeSet<String> {
        self.statements().flat_map(Statement::connectives).collect()
    }

    pub fn map_statements(&self, f: impl Fn(&Statement) -> Statement) -> Rule {
        Rule {
            premises: self.premises.iter().map(&f).collect(),
            conclusion: f(&self.conclusion),
        }
    }
}

/// `φ` is directly derivable from `Ψ` by `rule` with witness `σ` when
/// `σ(conclusion) = φ` and `σ[premises] ⊆ Ψ`. Premises are matched in
/// order, backtracking over `Ψ`.
pub fn directly_derivable(rule: &Rule, psi: &[Statement], phi: &Statement) -> Option<Substitution> {
    let mut binding = BTreeMap::new();
    if !match_statement(&rule.conclusion, phi, &mut binding) {
        return None;
    }
    fn extend(
        premises: &[Statement],
        psi: &[Statement],
        binding: BTreeMap<u32, super::formula::Formula>,
    ) -> Option<BTreeMap<u32, super::formula::Formula>> {
        let Some((first, rest)) = premises.split_first() else {
            return Some(binding);
        };
        psi.iter().find_map(|candidate| {
            let mut b = binding.clone();
            if match_statement(first, candidate, &mut b) {
                extend(rest, psi, b)
            } else {
                None
            }
        })
    }
    extend(&rule.premises, psi, binding).map(binding_to_substitution)
}

/// A finite presentation: axioms and rules over one statement type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct DeductiveSystem {
    pub name: String,
    language: Language,
    ty: (usize, usize),
    axioms: Vec<Statement>,
    rules: Vec<Rule>,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    name: String,
    language: Language,
    #[serde(rename = "type")]
    ty: (usize, usize),
    #[serde(default)]
    axioms: Vec<Statement>,
    #[serde(default)]
    rules: Vec<Rule>,
}

impl TryFrom<SystemRepr> for DeductiveSystem {
    type Error = LogicError;
    fn try_from(r: SystemRepr) -> Result<Self, LogicError> {
        DeductiveSystem::new(r.name, r.language, r.ty, r.axioms, r.rules)
    }
}

impl From<DeductiveSystem> for SystemRepr {
    fn from(s: DeductiveSystem) -> Self {
        SystemRepr {
            name: s.name,
            language: s.language,
            ty: s.ty,
            axioms: s.axioms,
            rules: s.rules,
        }
    }
}

impl DeductiveSystem {
    pub fn new(
        name: impl Into<String>,
        language: Language,
        ty: (usize, usize),
        axioms: Vec<Statement>,
        rules: Vec<Rule>,
    ) -> Result<Self, LogicError> {
        let system = DeductiveSystem {
            name: name.into(),
            language,
            ty,
            axioms,
            rules,
        };
        for s in system.axioms.iter().chain(system.rules.iter().flat_map(Rule::statements)) {
            system.check_statement(s)?;
        }
        Ok(system)
    }

    pub fn language(&self) -> &Language {
        &self.language
    }

    pub fn statement_type(&self) -> (usize, usize) {
        self.ty
    }

    pub fn axioms(&self) -> &[Statement] {
        &self.axioms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Axioms as premise-free rules followed by the proper rules, the
    /// order proof search tries them in.
    pub fn all_rules(&self) -> Vec<Rule> {
        self.axioms
            .iter()
            .cloned()
            .map(Rule::axiom)
            .chain(self.rules.iter().cloned())
            .collect()
    }

    pub fn check_statement(&self, s: &Statement) -> Result<(), LogicError> {
        if s.ty != self.ty {
            return Err(LogicError::TypeMismatch {
                expected: self.ty,
                found: s.parts.len(),
            });
        }
        self.language.check_statement(s)
    }

    /// Same language and type, with the given axioms and rules.
    pub fn with_rules(&self, name: impl Into<String>, axioms: Vec<Statement>, rules: Vec<Rule>) -> Result<Self, LogicError> {
        DeductiveSystem::new(name, self.language.clone(), self.ty, axioms, rules)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Justification {
    Premise,
    Axiom {
        index: usize,
        subst: Substitution,
    },
    Rule {
        index: usize,
        subst: Substitution,
        premises: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub statement: Statement,
    pub justification: Justification,
}

/// A sequence of justified steps; the last one is the conclusion.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn conclusion(&self) -> Option<&Statement> {
        self.steps.last().map(|s| &s.statement)
    }

    /// Height of the proof tree: premises and axiom instances count 1.
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.steps.len()];
        for (i, s) in self.steps.iter().enumerate() {
            h[i] = match &s.justification {
                Justification::Rule { premises, .. } => {
                    1 + premises.iter().map(|&p| h.get(p).copied().unwrap_or(0)).max().unwrap_or(0)
                }
                _ => 1,
            };
        }
        h.last().copied().unwrap_or(0)
    }

    pub fn max_formula_size(&self) -> usize {
        self.steps.iter().map(|s| s.statement.max_formula_size()).max().unwrap_or(0)
    }

    /// Applies `σ` to every step, composing it onto every witness.
    pub fn substitute(&self, sigma: &Substitution) -> Derivation {
        let steps = self
            .steps
            .iter()
            .map(|s| Step {
                statement: sigma.apply(&s.statement),
                justification: match &s.justification {
                    Justification::Premise => Justification::Premise,
                    Justification::Axiom { index, subst } => Justification::Axiom {
                        index: *index,
                        subst: sigma.compose(subst),
                    },
                    Justification::Rule { index, subst, premises } => Justification::Rule {
                        index: *index,
                        subst: sigma.compose(subst),
                        premises: premises.clone(),
                    },
                },
            })
            .collect();
        Derivation { steps }
    }

    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.steps.iter().map(|s| &s.statement)
    }
}

fn bad(index: usize, reason: impl Into<String>) -> LogicError {
    LogicError::BadStep {
        index,
        reason: reason.into(),
    }
}

/// Validates every step of `d` as a derivation from `premises` in
/// `system`, without any search.
pub fn check_derivation(system: &DeductiveSystem, premises: &[Statement], d: &Derivation) -> Result<(), LogicError> {
    if d.is_empty() {
        return Err(bad(0, "empty derivation"));
    }
    for (i, step) in d.steps.iter().enumerate() {
        system
            .check_statement(&step.statement)
            .map_err(|e| bad(i, format!("ill-formed statement: {e}")))?;
        match &step.justification {
            Justification::Premise => {
                if !premises.contains(&step.statement) {
                    return Err(bad(i, "not among the premises"));
                }
            }
            Justification::Axiom { index, subst } => {
                let axiom = system.axioms.get(*index).ok_or_else(|| bad(i, "no such axiom"))?;
                if subst.apply(axiom) != step.statement {
                    return Err(bad(i, format!("not the instance of axiom {index} under {subst}")));
                }
            }
            Justification::Rule {
                index,
                subst,
                premises: used,
            } => {
                let rule = system.rules.get(*index).ok_or_else(|| bad(i, "no such rule"))?;
                if used.len() != rule.premises.len() {
                    return Err(bad(i, "premise count differs from the rule"));
                }
                if subst.apply(&rule.conclusion) != step.statement {
                    return Err(bad(i, format!("conclusion is not the instance of rule {index} under {subst}")));
                }
                for (k, (&j, p)) in used.iter().zip(&rule.premises).enumerate() {
                    if j >= i {
                        return Err(bad(i, format!("premise {k} refers forward to step {j}")));
                    }
                    if subst.apply(p) != d.steps[j].statement {
                        return Err(bad(i, format!("premise {k} does not match step {j}")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// As [`check_derivation`], and the conclusion is `goal`.
pub fn check_derivation_of(
    system: &DeductiveSystem,
    premises: &[Statement],
    goal: &Statement,
    d: &Derivation,
) -> Result<(), LogicError> {
    check_derivation(system, premises, d)?;
    if d.conclusion() != Some(goal) {
        return Err(bad(d.len() - 1, "last step is not the goal"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::cpl;
    use crate::logic::parse::parse_statement_raw as p;

    #[test]
    fn modus_ponens_witness() {
        let s = cpl::lukasiewicz();
        let mp = &s.rules()[0];
        let psi = [p("a").unwrap(), p("imp(a,b)").unwrap()];
        let sigma = directly_derivable(mp, &psi, &p("b").unwrap()).unwrap();
        assert_eq!(sigma.get(0).to_string(), "a");
        assert_eq!(sigma.get(1).to_string(), "b");
        assert!(directly_derivable(mp, &psi[..1], &p("b").unwrap()).is_none());
    }

    #[test]
    fn axioms_match_any_instance() {
        let a1 = Rule::axiom(p("imp(x0,imp(x1,x0))").unwrap());
        assert!(directly_derivable(&a1, &[], &p("imp(not(x3),imp(x0,not(x3)))").unwrap()).is_some());
        assert!(directly_derivable(&a1, &[], &p("imp(x0,imp(x1,x1))").unwrap()).is_none());
    }

    #[test]
    fn hand_proof_checks_and_forgery_is_caught() {
        let s = cpl::lukasiewicz();
        let d = cpl::identity_proof();
        assert_eq!(d.len(), 5);
        check_derivation_of(&s, &[], &p("imp(x0,x0)").unwrap(), &d).unwrap();
        let mut forged = d.clone();
        forged.steps[4].statement = p("imp(x0,x1)").unwrap();
        assert!(matches!(check_derivation(&s, &[], &forged), Err(LogicError::BadStep { index: 4, .. })));
        let mut forward = d.clone();
        if let Justification::Rule { premises, .. } = &mut forward.steps[2].justification {
            premises[0] = 3;
        }
        assert!(matches!(check_derivation(&s, &[], &forward), Err(LogicError::BadStep { index: 2, .. })));
    }

    #[test]
    fn premise_steps() {
        let s = cpl::lukasiewicz();
        let phi = p("not(x0)").unwrap();
        let d = Derivation {
            steps: vec![Step {
                statement: phi.clone(),
                justification: Justification::Premise,
            }],
        };
        check_derivation(&s, std::slice::from_ref(&phi), &d).unwrap();
        assert!(check_derivation(&s, &[], &d).is_err());
    }

    #[test]
    fn system_json_round_trip() {
        let s = cpl::lukasiewicz();
        let text = serde_json::to_string(&s).unwrap();
        let back: DeductiveSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = text.replace("\"arity\":1", "\"arity\":2");
        assert!(serde_json::from_str::<DeductiveSystem>(&bad).is_err());
    }
}
