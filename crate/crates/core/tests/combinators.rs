use qmlogic::combinators::*;
use qmlogic::logic::parse::{parse_formula_raw, parse_statement_raw as p};
use qmlogic::logic::{check_derivation, cpl, derive, Budget, Connective, DeductiveSystem, Derivation, Justification, Language, Step, Substitution};

fn to_fragment(system: &DeductiveSystem) -> DeductiveSystem {
    cpl::renamed(system, "to", |_| "to".to_string())
}

fn to_imp(source: &DeductiveSystem) -> Interpretation {
    let t = Translation::new(
        source.language().clone(),
        cpl::language(),
        [("to".to_string(), parse_formula_raw("imp(x0,x1)").unwrap())].into(),
    )
    .unwrap();
    Interpretation::pointwise(t, source.statement_type())
}

#[test]
fn injection_replays_a_factor_proof_as_its_retagging() {
    let s = cpl::lukasiewicz();
    let c = logical_coproduct(&[s.clone(), s.clone()]).unwrap();
    let d = cpl::identity_proof();
    let out = interpret_proof(&d, &s, &[], &c.system, &c.injections[1], Budget::depth(3)).unwrap();
    check_derivation(&c.system, &[], &out).unwrap();
    let retagged: Vec<_> = d.statements().map(|x| x.map_connectives(&|n: &str| tag(n, 2))).collect();
    let replayed: Vec<_> = out.statements().cloned().collect();
    assert_eq!(replayed, retagged);
    // second factor axioms come after the three of the first
    assert!(matches!(out.steps[0].justification, Justification::Axiom { index: 4, .. }));
}

#[test]
fn premises_are_carried_across() {
    let s = cpl::lukasiewicz();
    let c = logical_coproduct(&[s.clone(), s.clone()]).unwrap();
    let premises = vec![p("x0").unwrap(), p("imp(x0,not(x1))").unwrap()];
    let r = derive(&s, &premises, &p("not(x1)").unwrap(), Budget::depth(2)).unwrap();
    let d = r.derivation.unwrap();
    let out = interpret_proof(&d, &s, &premises, &c.system, &c.injections[0], Budget::depth(3)).unwrap();
    let images = c.injections[0].image_set(&premises);
    check_derivation(&c.system, &images, &out).unwrap();
    assert_eq!(out.conclusion(), Some(&p("not#1(x1)").unwrap()));
}

#[test]
fn unjustified_step_is_reported() {
    let s = cpl::lukasiewicz();
    let c = logical_coproduct(&[s.clone(), s.clone()]).unwrap();
    let d = Derivation {
        steps: vec![Step {
            statement: p("imp(x0,x0)").unwrap(),
            justification: Justification::Axiom {
                index: 0,
                subst: Substitution::identity(),
            },
        }],
    };
    assert!(matches!(
        interpret_proof(&d, &s, &[], &c.system, &c.injections[0], Budget::depth(3)),
        Err(CombinatorError::StepNotInterpretable { index: 0, .. })
    ));
}

#[test]
fn rule_without_target_counterpart_is_not_interpretable() {
    // the source has an extra rule x0 / not(not(x0)) that the target lacks
    let s = cpl::lukasiewicz();
    let mut rules = s.rules().to_vec();
    rules.push(qmlogic::logic::Rule {
        premises: vec![p("x0").unwrap()],
        conclusion: p("not(not(x0))").unwrap(),
    });
    let strong = s.with_rules("cpl+dn", s.axioms().to_vec(), rules).unwrap();
    let d = Derivation {
        steps: vec![
            Step {
                statement: p("x0").unwrap(),
                justification: Justification::Premise,
            },
            Step {
                statement: p("not(not(x0))").unwrap(),
                justification: Justification::Rule {
                    index: 1,
                    subst: Substitution::identity(),
                    premises: vec![0],
                },
            },
        ],
    };
    let empty = s.with_rules("empty", vec![], vec![]).unwrap();
    let id = Interpretation::identity(&s);
    assert!(matches!(
        interpret_proof(&d, &strong, &[p("x0").unwrap()], &empty, &id, Budget::depth(3)),
        Err(CombinatorError::StepNotInterpretable { index: 1, .. })
    ));
}

#[test]
fn fragment_map_checks_out() {
    let m = to_fragment(&cpl::implicational());
    let r = to_imp(&m);
    let s = cpl::lukasiewicz();
    let suite = vec![
        SuiteEntry {
            premises: vec![],
            goal: p("to(x0,x0)").unwrap(),
            derivation: None,
        },
        SuiteEntry {
            premises: vec![p("x0").unwrap(), p("to(x0,x1)").unwrap()],
            goal: p("x1").unwrap(),
            derivation: None,
        },
    ];
    let sigmas = vec![Substitution::from_pairs([(1, parse_formula_raw("to(x2,x0)").unwrap())]).unwrap()];
    let report = check_interpretation(&r, &m, &s, &suite, &sigmas, Budget::depth(4)).unwrap();
    assert_eq!(report.forward, Verdict::Pass);
    assert_eq!(report.conservative, Verdict::Pass);
    assert_eq!(report.invariance_checks, 4);
    let tr = check_translation_conditions(&r.translation, &sigmas);
    assert!(tr.passed(), "{tr:?}");
}

#[test]
fn collapsing_a_constant_onto_a_variable_violates_the_conditions() {
    let src = Language::new(vec![Connective::new("imp", 2), Connective::new("id", 1)]).unwrap();
    let t = Translation::new(
        src,
        cpl::language(),
        [
            ("imp".to_string(), parse_formula_raw("imp(x0,x1)").unwrap()),
            ("id".to_string(), parse_formula_raw("x0").unwrap()),
        ]
        .into(),
    )
    .unwrap();
    let sigma = Substitution::from_pairs([(0, parse_formula_raw("id(x1)").unwrap())]).unwrap();
    let report = check_translation_conditions(&t, &[sigma]);
    assert!(!report.passed());
    assert_eq!(report.variable_heads, ["id"]);
    assert!(report.violations.iter().any(|v| v.condition == "iii" && v.witness.contains("id(x1)")));
}

#[test]
fn non_conservative_fragment_map_is_refused() {
    // an empty fragment system cannot reflect theorems of CPL
    let m = to_fragment(&cpl::implicational()).with_rules("to-empty", vec![], vec![]).unwrap();
    let r = to_imp(&m);
    let s = cpl::lukasiewicz();
    let suite = vec![SuiteEntry {
        premises: vec![],
        goal: p("to(x0,x0)").unwrap(),
        derivation: None,
    }];
    let check = FragmentCheck {
        suite: &suite,
        substitutions: &[],
        budget: Budget::depth(3),
    };
    let err = amalgamated_system(&s, &s, &m, &r, &r, &[p("to(x0,x1)").unwrap()], Some(check)).unwrap_err();
    assert!(matches!(err, CombinatorError::NonConservativeWitness { map: 1, entry: 0, .. }), "{err:?}");
}

#[test]
fn validated_amalgam_bridges_in_one_step() {
    let m = to_fragment(&cpl::implicational());
    let r = to_imp(&m);
    let s = cpl::lukasiewicz();
    let suite = vec![SuiteEntry {
        premises: vec![p("x0").unwrap(), p("to(x0,x1)").unwrap()],
        goal: p("x1").unwrap(),
        derivation: None,
    }];
    let check = FragmentCheck {
        suite: &suite,
        substitutions: &[],
        budget: Budget::depth(3),
    };
    let a = amalgamated_system(&s, &s, &m, &r, &r, &[p("to(x0,x1)").unwrap()], Some(check)).unwrap();
    let names: Vec<_> = a.system.language().connectives().iter().map(|c| c.name.clone()).collect();
    assert_eq!(names, ["to", "imp#1", "not#1", "imp#2", "not#2"]);
    // bridges are schematic, so they apply to instances as well
    let from = p("imp#1(not#1(x2),x2)").unwrap();
    let to = p("imp#2(not#1(x2),x2)").unwrap();
    let r = derive(&a.system, &[from], &to, Budget::depth(2)).unwrap();
    assert!(r.found());
    assert_eq!(r.derivation.unwrap().len(), 2);
}

#[test]
fn type_mismatch_is_rejected() {
    let s = cpl::lukasiewicz();
    let eq = DeductiveSystem::new("eq", cpl::language(), (2, 0), vec![], vec![]).unwrap();
    assert!(matches!(logical_coproduct(&[s, eq]), Err(CombinatorError::TypeMismatch { .. })));
}
