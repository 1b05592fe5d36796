//! Classical propositional logic over `{imp, not}`: Łukasiewicz's three
//! axiom schemes and modus ponens.

use super::formula::{Connective, Formula, Language, Statement, FORMULA_TYPE};
use super::parse::parse_statement_raw;
use super::subst::Substitution;
use super::system::{DeductiveSystem, Derivation, Justification, Rule, Step};

pub const A1: &str = "imp(x0,imp(x1,x0))";
pub const A2: &str = "imp(imp(x0,imp(x1,x2)),imp(imp(x0,x1),imp(x0,x2)))";
pub const A3: &str = "imp(imp(not(x0),not(x1)),imp(x1,x0))";
/// Peirce's law, completing the implicational fragment.
pub const PEIRCE: &str = "imp(imp(imp(x0,x1),x0),x0)";

fn st(text: &str) -> Statement {
    parse_statement_raw(text).expect("built-in statement")
}

pub fn language() -> Language {
    Language::new(vec![Connective::new("imp", 2), Connective::new("not", 1)]).unwrap()
}

pub fn modus_ponens(imp: &str) -> Rule {
    Rule {
        premises: vec![st("x0"), st(&format!("{imp}(x0,x1)"))],
        conclusion: st("x1"),
    }
}

pub fn lukasiewicz() -> DeductiveSystem {
    DeductiveSystem::new(
        "cpl",
        language(),
        FORMULA_TYPE,
        vec![st(A1), st(A2), st(A3)],
        vec![modus_ponens("imp")],
    )
    .unwrap()
}

/// The implicational fragment: A1, A2, Peirce's law and modus ponens over
/// `{imp}`.
pub fn implicational() -> DeductiveSystem {
    DeductiveSystem::new(
        "imp-fragment",
        Language::new(vec![Connective::new("imp", 2)]).unwrap(),
        FORMULA_TYPE,
        vec![st(A1), st(A2), st(PEIRCE)],
        vec![modus_ponens("imp")],
    )
    .unwrap()
}

/// The same system with its connectives renamed.
pub fn renamed(system: &DeductiveSystem, name: &str, rename: impl Fn(&str) -> String) -> DeductiveSystem {
    let language = Language::new(
        system
            .language()
            .connectives()
            .iter()
            .map(|c| Connective::new(rename(&c.name), c.arity))
            .collect(),
    )
    .unwrap();
    DeductiveSystem::new(
        name,
        language,
        system.statement_type(),
        system.axioms().iter().map(|a| a.map_connectives(&rename)).collect(),
        system.rules().iter().map(|r| r.map_statements(|s| s.map_connectives(&rename))).collect(),
    )
    .unwrap()
}

/// The textbook five-line proof of `imp(x0,x0)`.
pub fn identity_proof() -> Derivation {
    let x0 = Formula::var(0);
    let imp = |a: Formula, b: Formula| Formula::app("imp", vec![a, b]);
    let s = |pairs: Vec<(u32, Formula)>| Substitution::from_pairs(pairs).unwrap();
    let xx = imp(x0.clone(), x0.clone());
    let steps = vec![
        Step {
            statement: st("imp(imp(x0,imp(imp(x0,x0),x0)),imp(imp(x0,imp(x0,x0)),imp(x0,x0)))"),
            justification: Justification::Axiom {
                index: 1,
                subst: s(vec![(1, xx.clone()), (2, x0.clone())]),
            },
        },
        Step {
            statement: st("imp(x0,imp(imp(x0,x0),x0))"),
            justification: Justification::Axiom {
                index: 0,
                subst: s(vec![(1, xx.clone())]),
            },
        },
        Step {
            statement: st("imp(imp(x0,imp(x0,x0)),imp(x0,x0))"),
            justification: Justification::Rule {
                index: 0,
                subst: s(vec![
                    (0, imp(x0.clone(), imp(xx.clone(), x0.clone()))),
                    (1, imp(imp(x0.clone(), xx.clone()), xx.clone())),
                ]),
                premises: vec![1, 0],
            },
        },
        Step {
            statement: st("imp(x0,imp(x0,x0))"),
            justification: Justification::Axiom {
                index: 0,
                subst: s(vec![(1, x0.clone())]),
            },
        },
        Step {
            statement: st("imp(x0,x0)"),
            justification: Justification::Rule {
                index: 0,
                subst: s(vec![(0, imp(x0.clone(), xx.clone())), (1, xx)]),
                premises: vec![3, 2],
            },
        },
    ];
    Derivation { steps }
}
