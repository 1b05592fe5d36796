//! Substitutions and one-way matching.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::{Formula, Statement, VAR_UNIVERSE};
use super::LogicError;

/// A finitely supported map from variables to formulas, the identity off
/// its support. Entries `x ↦ x` are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    map: BTreeMap<u32, Formula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Formula)>) -> Result<Self, LogicError> {
        let mut s = Substitution::identity();
        for (v, f) in pairs {
            if v >= VAR_UNIVERSE {
                return Err(LogicError::VariableOutOfRange { index: v });
            }
            s.set(v, f);
        }
        Ok(s)
    }

    pub(crate) fn set(&mut self, v: u32, f: Formula) {
        if f == Formula::Var(v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, f);
        }
    }

    pub fn get(&self, v: u32) -> Formula {
        self.map.get(&v).cloned().unwrap_or(Formula::Var(v))
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, &Formula)> {
        self.map.iter().map(|(&v, f)| (v, f))
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// Sends variables to variables.
    pub fn is_variable_substitution(&self) -> bool {
        self.map.values().all(|f| matches!(f, Formula::Var(_)))
    }

    pub fn apply_formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(v) => self.get(*v),
            Formula::App(name, args) => {
                Formula::App(name.clone(), args.iter().map(|a| self.apply_formula(a)).collect())
            }
        }
    }

    pub fn apply(&self, s: &Statement) -> Statement {
        Statement {
            ty: s.ty,
            parts: s.parts.iter().map(|f| self.apply_formula(f)).collect(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::identity();
        for (v, f) in &other.map {
            out.set(*v, self.apply_formula(f));
        }
        for (v, f) in &self.map {
            if !other.map.contains_key(v) {
                out.set(*v, f.clone());
            }
        }
        out
    }

    pub fn map_formulas(&self, g: impl Fn(&Formula) -> Formula) -> Substitution {
        let mut out = Substitution::identity();
        for (v, f) in &self.map {
            out.set(*v, g(f));
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (v, t)) in self.map.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{v} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Substitution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let named: BTreeMap<String, &Formula> = self.map.iter().map(|(v, f)| (format!("x{v}"), f)).collect();
        named.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Substitution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let named = BTreeMap::<String, Formula>::deserialize(d)?;
        let pairs = named
            .into_iter()
            .map(|(k, f)| match super::parse::parse_formula_raw(&k) {
                Ok(Formula::Var(v)) => Ok((v, f)),
                _ => Err(serde::de::Error::custom(format!("not a variable: {k}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Substitution::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}

/// Extends `binding` so that `binding(pattern) = target`, or returns false
/// (the binding may then be partially extended).
pub fn match_formula(pattern: &Formula, target: &Formula, binding: &mut BTreeMap<u32, Formula>) -> bool {
    match pattern {
        Formula::Var(v) => match binding.get(v) {
            Some(bound) => bound == target,
            None => {
                binding.insert(*v, target.clone());
                true
            }
        },
        Formula::App(name, args) => match target {
            Formula::App(tname, targs) if tname == name && targs.len() == args.len() => {
                args.iter().zip(targs).all(|(p, t)| match_formula(p, t, binding))
            }
            _ => false,
        },
    }
}

pub fn match_statement(pattern: &Statement, target: &Statement, binding: &mut BTreeMap<u32, Formula>) -> bool {
    pattern.ty == target.ty
        && pattern
            .parts
            .iter()
            .zip(&target.parts)
            .all(|(p, t)| match_formula(p, t, binding))
}

pub(crate) fn binding_to_substitution(binding: BTreeMap<u32, Formula>) -> Substitution {
    let mut s = Substitution::identity();
    for (v, f) in binding {
        s.set(v, f);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse::parse_formula_raw as p;

    #[test]
    fn identity_and_single_binding() {
        let f = p("imp(x0,x0)").unwrap();
        assert_eq!(Substitution::identity().apply_formula(&f), f);
        let s = Substitution::from_pairs([(0, p("not(x1)").unwrap())]).unwrap();
        assert_eq!(s.apply_formula(&f), p("imp(not(x1),not(x1))").unwrap());
    }

    #[test]
    fn composition_applies_right_first() {
        let s = Substitution::from_pairs([(1, p("not(x2)").unwrap())]).unwrap();
        let t = Substitution::from_pairs([(0, p("imp(x1,x1)").unwrap())]).unwrap();
        let f = p("imp(x0,x1)").unwrap();
        let st = s.compose(&t);
        assert_eq!(st.apply_formula(&f), s.apply_formula(&t.apply_formula(&f)));
        assert_eq!(st.get(1), p("not(x2)").unwrap());
    }

    #[test]
    fn trivial_entries_are_dropped() {
        let s = Substitution::from_pairs([(0, Formula::Var(0))]).unwrap();
        assert!(s.is_identity());
        let swap = Substitution::from_pairs([(0, Formula::Var(1)), (1, Formula::Var(0))]).unwrap();
        assert!(swap.compose(&swap).is_identity());
        assert!(swap.is_variable_substitution());
    }

    #[test]
    fn matching_is_one_way() {
        let mut b = BTreeMap::new();
        assert!(match_formula(&p("imp(x0,x1)").unwrap(), &p("imp(x1,not(x0))").unwrap(), &mut b));
        assert_eq!(b[&1], p("not(x0)").unwrap());
        let mut b = BTreeMap::new();
        assert!(!match_formula(&p("imp(x0,x0)").unwrap(), &p("imp(x1,x2)").unwrap(), &mut b));
    }

    #[test]
    fn json_form() {
        let s = Substitution::from_pairs([(0, p("not(x1)").unwrap())]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"x0":"not(x1)"}"#);
        assert_eq!(serde_json::from_str::<Substitution>(&text).unwrap(), s);
    }
}
