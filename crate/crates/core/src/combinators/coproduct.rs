//! The coproduct of deductive systems over disjoint copies of their
//! languages.

use serde::Serialize;

use super::interpretation::Interpretation;
use super::translation::Translation;
use super::CombinatorError;
use crate::logic::formula::{Connective, Language, Statement};
use crate::logic::system::{DeductiveSystem, Rule};

/// `name#i`, the copy of a connective of the `i`-th factor (1-based).
pub fn tag(name: &str, i: usize) -> String {
    format!("{name}#{i}")
}

#[derive(Debug, Clone, Serialize)]
pub struct LogicalCoproduct {
    pub system: DeductiveSystem,
    pub factors: Vec<DeductiveSystem>,
    /// `e_i`, sending each factor into the coproduct.
    pub injections: Vec<Interpretation>,
}

impl LogicalCoproduct {
    /// The joint language with only the axioms and rules of factor `i`
    /// (1-based).
    pub fn factor_only(&self, i: usize) -> DeductiveSystem {
        let f = &self.factors[i - 1];
        let rename = |n: &str| tag(n, i);
        self.system
            .with_rules(
                format!("{}-only-{i}", self.system.name),
                f.axioms().iter().map(|a| a.map_connectives(&rename)).collect(),
                f.rules().iter().map(|r| r.map_statements(|s| s.map_connectives(&rename))).collect(),
            )
            .expect("retagged rules live in the joint language")
    }
}

/// `S_1 ⊕ … ⊕ S_n`: every connective `f` of `S_i` becomes `f#i`, and the
/// axioms and rules are the retagged ones of every factor, in factor order.
pub fn logical_coproduct(systems: &[DeductiveSystem]) -> Result<LogicalCoproduct, CombinatorError> {
    let Some(first) = systems.first() else {
        return Err(CombinatorError::FragmentMismatch {
            reason: "a coproduct needs at least one factor".into(),
        });
    };
    let ty = first.statement_type();
    let mut connectives = Vec::new();
    let mut axioms: Vec<Statement> = Vec::new();
    let mut rules: Vec<Rule> = Vec::new();
    for (k, s) in systems.iter().enumerate() {
        if s.statement_type() != ty {
            return Err(CombinatorError::TypeMismatch {
                expected: ty,
                found: s.statement_type(),
            });
        }
        let i = k + 1;
        let rename = |n: &str| tag(n, i);
        connectives.extend(s.language().connectives().iter().map(|c| Connective::new(tag(&c.name, i), c.arity)));
        axioms.extend(s.axioms().iter().map(|a| a.map_connectives(&rename)));
        rules.extend(s.rules().iter().map(|r| r.map_statements(|x| x.map_connectives(&rename))));
    }
    let language = Language::new(connectives)?;
    let name = systems.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join("+");
    let system = DeductiveSystem::new(name, language.clone(), ty, axioms, rules)?;
    let injections = systems
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let t = Translation::renaming(s.language(), &language, |n| tag(n, k + 1))?;
            Ok(Interpretation::pointwise(t, ty))
        })
        .collect::<Result<_, CombinatorError>>()?;
    Ok(LogicalCoproduct {
        system,
        factors: systems.to_vec(),
        injections,
    })
}

/// The copairing `[f_1, …, f_n]` of interpretations into one target, which
/// must agree on templates.
pub fn copairing(coproduct: &LogicalCoproduct, maps: &[Interpretation]) -> Result<Interpretation, CombinatorError> {
    if maps.len() != coproduct.factors.len() {
        return Err(CombinatorError::FragmentMismatch {
            reason: format!("{} maps for {} factors", maps.len(), coproduct.factors.len()),
        });
    }
    let templates = &maps[0].templates;
    if maps.iter().any(|m| &m.templates != templates) {
        return Err(CombinatorError::FragmentMismatch {
            reason: "factor maps use different templates".into(),
        });
    }
    let target = maps[0].translation.target().clone();
    if maps.iter().any(|m| m.translation.target() != &target) {
        return Err(CombinatorError::FragmentMismatch {
            reason: "factor maps have different targets".into(),
        });
    }
    let mut terms = std::collections::BTreeMap::new();
    for (k, m) in maps.iter().enumerate() {
        for c in coproduct.factors[k].language().connectives() {
            let t = m.translation.term(&c.name).ok_or_else(|| CombinatorError::FragmentMismatch {
                reason: format!("map {} has no term for {}", k + 1, c.name),
            })?;
            terms.insert(tag(&c.name, k + 1), t.clone());
        }
    }
    let translation = Translation::new(coproduct.system.language().clone(), target, terms)?;
    Interpretation::new(translation, coproduct.system.statement_type(), templates.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::cpl;
    use crate::logic::derive::{derive, Budget};
    use crate::logic::parse::parse_statement_raw as p;

    #[test]
    fn copies_are_disjoint() {
        let c = logical_coproduct(&[cpl::lukasiewicz(), cpl::lukasiewicz()]).unwrap();
        let names: Vec<_> = c.system.language().connectives().iter().map(|c| c.name.clone()).collect();
        assert_eq!(names, ["imp#1", "not#1", "imp#2", "not#2"]);
        assert_eq!(c.system.axioms().len(), 6);
        assert_eq!(c.system.rules().len(), 2);
        assert_eq!(c.injections[1].image(&p("not(x0)").unwrap()), vec![p("not#2(x0)").unwrap()]);
    }

    #[test]
    fn both_identities_are_theorems() {
        let c = logical_coproduct(&[cpl::lukasiewicz(), cpl::lukasiewicz()]).unwrap();
        for g in ["imp#1(x0,x0)", "imp#2(x0,x0)"] {
            assert!(derive(&c.system, &[], &p(g).unwrap(), Budget::depth(3)).unwrap().found());
        }
    }

    #[test]
    fn copairing_of_identities_collapses() {
        let s = cpl::lukasiewicz();
        let c = logical_coproduct(&[s.clone(), s.clone()]).unwrap();
        let id = Interpretation::identity(&s);
        let fold = copairing(&c, &[id.clone(), id]).unwrap();
        assert_eq!(fold.image(&p("imp#2(x0,not#1(x1))").unwrap()), vec![p("imp(x0,not(x1))").unwrap()]);
        let back = c.injections[0].then(&fold).unwrap();
        assert_eq!(back.image(&p("not(x3)").unwrap()), vec![p("not(x3)").unwrap()]);
    }
}
