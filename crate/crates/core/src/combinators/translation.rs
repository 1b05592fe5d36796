//! Language translations and the induced maps on substitutions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CombinatorError;
use crate::logic::formula::{Formula, Language, Statement};
use crate::logic::subst::Substitution;

/// Sends each source connective `f` of arity `n` to a target formula over
/// `x0 … x{n-1}`; the induced map on formulas fixes variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TranslationRepr", into = "TranslationRepr")]
pub struct Translation {
    source: Language,
    target: Language,
    terms: BTreeMap<String, Formula>,
}

#[derive(Serialize, Deserialize)]
struct TranslationRepr {
    source: Language,
    target: Language,
    terms: BTreeMap<String, Formula>,
}

impl TryFrom<TranslationRepr> for Translation {
    type Error = CombinatorError;
    fn try_from(r: TranslationRepr) -> Result<Self, CombinatorError> {
        Translation::new(r.source, r.target, r.terms)
    }
}

impl From<Translation> for TranslationRepr {
    fn from(t: Translation) -> Self {
        TranslationRepr {
            source: t.source,
            target: t.target,
            terms: t.terms,
        }
    }
}

fn primitive(name: &str, arity: usize) -> Formula {
    Formula::App(name.to_string(), (0..arity as u32).map(Formula::Var).collect())
}

impl Translation {
    pub fn new(source: Language, target: Language, terms: BTreeMap<String, Formula>) -> Result<Self, CombinatorError> {
        for c in source.connectives() {
            let term = terms.get(&c.name).ok_or_else(|| CombinatorError::BadTranslation {
                reason: format!("no term for {}", c.name),
            })?;
            target.check_formula(term).map_err(|e| CombinatorError::BadTranslation {
                reason: format!("term for {}: {e}", c.name),
            })?;
            let mut vars = Default::default();
            term.collect_vars(&mut vars);
            if let Some(v) = vars.iter().find(|&&v| v as usize >= c.arity) {
                return Err(CombinatorError::BadTranslation {
                    reason: format!("term for {} uses x{v} but the arity is {}", c.name, c.arity),
                });
            }
        }
        if let Some(extra) = terms.keys().find(|k| !source.contains(k)) {
            return Err(CombinatorError::BadTranslation {
                reason: format!("{extra} is not a source connective"),
            });
        }
        Ok(Translation { source, target, terms })
    }

    pub fn identity(language: &Language) -> Self {
        Translation::renaming(language, language, |n| n.to_string()).unwrap()
    }

    /// `f ↦ rename(f)(x0, …)`.
    pub fn renaming(source: &Language, target: &Language, rename: impl Fn(&str) -> String) -> Result<Self, CombinatorError> {
        let terms = source
            .connectives()
            .iter()
            .map(|c| (c.name.clone(), primitive(&rename(&c.name), c.arity)))
            .collect();
        Translation::new(source.clone(), target.clone(), terms)
    }

    pub fn source(&self) -> &Language {
        &self.source
    }

    pub fn target(&self) -> &Language {
        &self.target
    }

    pub fn term(&self, connective: &str) -> Option<&Formula> {
        self.terms.get(connective)
    }

    /// The homomorphic extension `τ`.
    pub fn apply_formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(v) => Formula::Var(*v),
            Formula::App(name, args) => {
                let images: Vec<(u32, Formula)> = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (i as u32, self.apply_formula(a)))
                    .collect();
                let plug = Substitution::from_pairs(images).expect("arity below the variable universe");
                plug.apply_formula(&self.terms[name])
            }
        }
    }

    pub fn apply(&self, s: &Statement) -> Statement {
        Statement {
            ty: s.ty,
            parts: s.parts.iter().map(|f| self.apply_formula(f)).collect(),
        }
    }

    /// `τ̄(σ)`, the substitution determined by `x ↦ τ(σ(x))`.
    pub fn transport(&self, sigma: &Substitution) -> Substitution {
        sigma.map_formulas(|f| self.apply_formula(f))
    }

    /// Connectives whose term is a bare variable; these make `τ⁻¹(x)`
    /// larger than `{x}`.
    pub fn variable_heads(&self) -> Vec<String> {
        self.terms
            .iter()
            .filter(|(_, t)| matches!(t, Formula::Var(_)))
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// `self` then `next`.
    pub fn then(&self, next: &Translation) -> Result<Translation, CombinatorError> {
        if self.target != next.source {
            return Err(CombinatorError::BadTranslation {
                reason: "composite of translations between different languages".into(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(n, t)| (n.clone(), next.apply_formula(t)))
            .collect();
        Translation::new(self.source.clone(), next.target.clone(), terms)
    }
}

/// Transport along `τ`.
pub fn transport_substitution(tau: &Translation, sigma: &Substitution) -> Substitution {
    tau.transport(sigma)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessViolation {
    pub condition: String,
    pub witness: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub witnesses: usize,
    pub idempotent_witnesses: usize,
    pub variable_witnesses: usize,
    pub variable_heads: Vec<String>,
    pub violations: Vec<WitnessViolation>,
}

impl TranslationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The three conditions characterizing quantale maps induced by
/// translations, checked on singletons `{σ}` for the supplied witnesses.
///
/// (i) `{σ}` goes to the singleton `{τ̄(σ)}` (true by construction; the
/// commuting square `τ(σφ) = τ̄(σ)(τφ)` is checked on the witness ranges).
/// (ii) if `τ̄(σ)` is idempotent then so is `σ`.
/// (iii) variable substitutions are fixed, nothing else lands on one, and
/// no connective is sent to a bare variable.
pub fn check_translation_conditions(tau: &Translation, witnesses: &[Substitution]) -> TranslationReport {
    let mut violations = Vec::new();
    let mut push = |condition: &str, sigma: &Substitution, detail: String| {
        violations.push(WitnessViolation {
            condition: condition.to_string(),
            witness: sigma.to_string(),
            detail,
        })
    };
    let mut idempotent = 0;
    let mut variable = 0;
    for sigma in witnesses {
        let image = tau.transport(sigma);
        for (v, f) in sigma.support() {
            for probe in [Formula::Var(v), f.clone()] {
                if tau.apply_formula(&sigma.apply_formula(&probe)) != image.apply_formula(&tau.apply_formula(&probe)) {
                    push("i", sigma, format!("square fails on {probe}"));
                }
            }
        }
        if image.compose(&image) == image {
            idempotent += 1;
            if sigma.compose(sigma) != *sigma {
                push("ii", sigma, format!("{image} is idempotent but the witness is not"));
            }
        }
        if sigma.is_variable_substitution() {
            variable += 1;
            if image != *sigma {
                push("iii", sigma, format!("variable substitution moved to {image}"));
            }
        } else if image.is_variable_substitution() {
            push("iii", sigma, format!("lands on the variable substitution {image}"));
        }
    }
    let variable_heads = tau.variable_heads();
    for c in &variable_heads {
        violations.push(WitnessViolation {
            condition: "iii".into(),
            witness: c.clone(),
            detail: format!("{c} is sent to a bare variable"),
        });
    }
    TranslationReport {
        witnesses: witnesses.len(),
        idempotent_witnesses: idempotent,
        variable_witnesses: variable,
        variable_heads,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::cpl;
    use crate::logic::formula::Connective;
    use crate::logic::parse::parse_formula_raw as p;
    use crate::logic::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn collapse() -> Translation {
        let src = Language::new(vec![Connective::new("imp#1", 2), Connective::new("not#1", 1)]).unwrap();
        Translation::renaming(&src, &cpl::language(), |n| n.trim_end_matches("#1").to_string()).unwrap()
    }

    #[test]
    fn identity_transport_is_identity() {
        let l = cpl::language();
        let t = Translation::identity(&l);
        let s = Substitution::from_pairs([(0, p("not(x1)").unwrap())]).unwrap();
        assert_eq!(t.transport(&s), s);
    }

    #[test]
    fn renaming_transports_componentwise() {
        let s = Substitution::from_pairs([(0, p("imp#1(x1,x2)").unwrap())]).unwrap();
        let expected = Substitution::from_pairs([(0, p("imp(x1,x2)").unwrap())]).unwrap();
        assert_eq!(transport_substitution(&collapse(), &s), expected);
    }

    #[test]
    fn transport_is_a_monoid_map() {
        let t = collapse();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let s = random::substitution(&mut rng, t.source(), 3, 3);
            let r = random::substitution(&mut rng, t.source(), 3, 3);
            assert_eq!(t.transport(&s.compose(&r)), t.transport(&s).compose(&t.transport(&r)));
            let f = random::formula(&mut rng, t.source(), 4, 3);
            assert_eq!(t.apply_formula(&s.apply_formula(&f)), t.transport(&s).apply_formula(&t.apply_formula(&f)));
        }
    }

    #[test]
    fn derived_terms() {
        // not as imp(x0, bot)
        let src = cpl::language();
        let tgt = Language::new(vec![Connective::new("imp", 2), Connective::new("bot", 0)]).unwrap();
        let terms = [
            ("imp".to_string(), p("imp(x0,x1)").unwrap()),
            ("not".to_string(), p("imp(x0,bot)").unwrap()),
        ]
        .into();
        let t = Translation::new(src, tgt, terms).unwrap();
        assert_eq!(t.apply_formula(&p("not(not(x3))").unwrap()), p("imp(imp(x3,bot),bot)").unwrap());
        assert!(check_translation_conditions(&t, &[]).passed());
    }

    #[test]
    fn rejects_out_of_arity_terms() {
        let src = cpl::language();
        let terms = [
            ("imp".to_string(), p("imp(x0,x1)").unwrap()),
            ("not".to_string(), p("imp(x0,x1)").unwrap()),
        ]
        .into();
        assert!(Translation::new(src.clone(), src, terms).is_err());
    }
}
