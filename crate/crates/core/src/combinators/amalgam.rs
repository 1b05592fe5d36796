//! Gluing two systems along a shared fragment.
//!
//! Given `r_1 : S → S_1` and `r_2 : S → S_2`, the amalgam takes the
//! connectives of `S` that both maps keep literally as shared, tags every
//! other connective of `S_i` with `#i`, and adds bridge rules `Θ` making
//! `e_1 r_1(φ)` and `e_2 r_2(φ)` interderivable for each generator `φ`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::coproduct::tag;
use super::interpretation::{check_interpretation, Interpretation, SuiteEntry, Verdict};
use super::translation::Translation;
use super::CombinatorError;
use crate::logic::derive::Budget;
use crate::logic::formula::{Connective, Formula, Language, Statement};
use crate::logic::subst::Substitution;
use crate::logic::system::{DeductiveSystem, Rule};

#[derive(Debug, Clone, Serialize)]
pub struct Amalgam {
    pub system: DeductiveSystem,
    pub shared: Vec<String>,
    /// The bridge rules, which are the trailing rules of `system`.
    pub theta: Vec<Rule>,
    pub injections: [Interpretation; 2],
    /// `e_i ∘ r_i`, equal on the fragment up to `Θ`.
    pub legs: [Interpretation; 2],
}

impl Amalgam {
    /// Index in `system.rules()` of the first bridge rule.
    pub fn theta_offset(&self) -> usize {
        self.system.rules().len() - self.theta.len()
    }
}

/// Optional validation of `r_1`, `r_2` before gluing.
pub struct FragmentCheck<'a> {
    pub suite: &'a [SuiteEntry],
    pub substitutions: &'a [Substitution],
    pub budget: Budget,
}

fn keeps(r: &Interpretation, c: &Connective) -> bool {
    let literal = Formula::App(c.name.clone(), (0..c.arity as u32).map(Formula::Var).collect());
    r.translation.term(&c.name) == Some(&literal)
}

pub fn amalgamated_system(
    s1: &DeductiveSystem,
    s2: &DeductiveSystem,
    fragment: &DeductiveSystem,
    r1: &Interpretation,
    r2: &Interpretation,
    generators: &[Statement],
    check: Option<FragmentCheck<'_>>,
) -> Result<Amalgam, CombinatorError> {
    let ty = fragment.statement_type();
    for (i, (s, r)) in [(s1, r1), (s2, r2)].into_iter().enumerate() {
        if s.statement_type() != ty || r.source_type != ty || r.target_type() != ty {
            return Err(CombinatorError::TypeMismatch {
                expected: ty,
                found: s.statement_type(),
            });
        }
        if r.translation.source() != fragment.language() || r.translation.target() != s.language() {
            return Err(CombinatorError::FragmentMismatch {
                reason: format!("r{} does not go from the fragment language to system {}", i + 1, i + 1),
            });
        }
    }
    for g in generators {
        fragment.check_statement(g)?;
    }
    if let Some(check) = &check {
        for (i, (s, r)) in [(s1, r1), (s2, r2)].into_iter().enumerate() {
            let report = check_interpretation(r, fragment, s, check.suite, check.substitutions, check.budget)?;
            if report.forward != Verdict::Pass {
                return Err(CombinatorError::FragmentMismatch {
                    reason: format!("r{} fails on the suite", i + 1),
                });
            }
            if let Some(e) = report.entries.iter().find(|e| e.conservative != Some(Verdict::Pass)) {
                return Err(CombinatorError::NonConservativeWitness {
                    map: i + 1,
                    entry: e.entry,
                    detail: e.witness.clone().unwrap_or_default(),
                });
            }
        }
    }

    let shared: Vec<String> = fragment
        .language()
        .connectives()
        .iter()
        .filter(|c| keeps(r1, c) && keeps(r2, c))
        .map(|c| c.name.clone())
        .collect();
    let is_shared = |n: &str| shared.iter().any(|s| s == n);
    let rename = |n: &str, i: usize| if is_shared(n) { n.to_string() } else { tag(n, i) };

    let mut connectives: Vec<Connective> = Vec::new();
    let mut names = BTreeSet::new();
    let mut add = |c: Connective| {
        if names.insert(c.name.clone()) {
            connectives.push(c);
        }
    };
    for c in fragment.language().connectives() {
        add(c.clone());
    }
    for (i, s) in [(1, s1), (2, s2)] {
        for c in s.language().connectives() {
            add(Connective::new(rename(&c.name, i), c.arity));
        }
    }
    let language = Language::new(connectives)?;

    let injections = [(1, s1), (2, s2)].map(|(i, s)| {
        let t = Translation::renaming(s.language(), &language, |n| rename(n, i)).expect("renamed connectives are in the amalgam language");
        Interpretation::pointwise(t, ty)
    });
    let legs = [r1.then(&injections[0])?, r2.then(&injections[1])?];

    let mut axioms = Vec::new();
    let mut rules = Vec::new();
    for (i, s) in [(1, s1), (2, s2)] {
        let f = |n: &str| rename(n, i);
        axioms.extend(s.axioms().iter().map(|a| a.map_connectives(&f)));
        rules.extend(s.rules().iter().map(|r| r.map_statements(|x| x.map_connectives(&f))));
    }
    let mut theta: Vec<Rule> = Vec::new();
    for g in generators {
        let images = [legs[0].image(g), legs[1].image(g)];
        for (from, to) in [(0, 1), (1, 0)] {
            for c in &images[to] {
                let r = Rule {
                    premises: images[from].clone(),
                    conclusion: c.clone(),
                };
                if !theta.contains(&r) {
                    theta.push(r);
                }
            }
        }
    }
    rules.extend(theta.iter().cloned());
    let name = format!("{}+{}/{}", s1.name, s2.name, fragment.name);
    let system = DeductiveSystem::new(name, language, ty, axioms, rules)?;
    Ok(Amalgam {
        system,
        shared,
        theta,
        injections,
        legs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::cpl;
    use crate::logic::derive::derive;
    use crate::logic::parse::{parse_formula_raw, parse_statement_raw as p};

    #[test]
    fn shared_fragment_gives_trivial_bridges() {
        let s = cpl::lukasiewicz();
        let m = cpl::implicational();
        let r = Interpretation::pointwise(Translation::renaming(m.language(), s.language(), |n| n.to_string()).unwrap(), m.statement_type());
        let a = amalgamated_system(&s, &s, &m, &r, &r, &[p("imp(x0,x1)").unwrap()], None).unwrap();
        assert_eq!(a.shared, ["imp"]);
        let names: Vec<_> = a.system.language().connectives().iter().map(|c| c.name.clone()).collect();
        assert_eq!(names, ["imp", "not#1", "not#2"]);
        assert!(a.theta.iter().all(|t| t.premises == vec![t.conclusion.clone()]));
    }

    #[test]
    fn translated_fragment_bridges_the_copies() {
        let s = cpl::lukasiewicz();
        let m = DeductiveSystem::new(
            "to",
            Language::new(vec![Connective::new("to", 2)]).unwrap(),
            s.statement_type(),
            vec![],
            vec![],
        )
        .unwrap();
        let t = Translation::new(m.language().clone(), s.language().clone(), [("to".to_string(), parse_formula_raw("imp(x0,x1)").unwrap())].into()).unwrap();
        let r = Interpretation::pointwise(t, m.statement_type());
        let a = amalgamated_system(&s, &s, &m, &r, &r, &[p("to(x0,x1)").unwrap()], None).unwrap();
        assert!(a.shared.is_empty());
        assert_eq!(a.theta.len(), 2);
        let r = derive(&a.system, &[p("imp#1(x0,x0)").unwrap()], &p("imp#2(x0,x0)").unwrap(), Budget::depth(2)).unwrap();
        assert!(r.found());
        assert_eq!(r.derivation.unwrap().len(), 2);
    }

    #[test]
    fn mismatched_fragment_is_rejected() {
        let s = cpl::lukasiewicz();
        let m = cpl::implicational();
        let r = Interpretation::identity(&s);
        assert!(matches!(
            amalgamated_system(&s, &s, &m, &r, &r, &[], None),
            Err(CombinatorError::FragmentMismatch { .. })
        ));
    }
}
