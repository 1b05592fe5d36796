//! Languages, formulas and statements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

/// Variables are `x0 … x15`.
pub const VAR_UNIVERSE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Connective {
    pub name: String,
    pub arity: usize,
}

impl Connective {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Connective {
            name: name.into(),
            arity,
        }
    }
}

/// A set of connectives with arities, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LanguageRepr", into = "LanguageRepr")]
pub struct Language {
    connectives: Vec<Connective>,
    arity: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct LanguageRepr {
    connectives: Vec<Connective>,
}

impl TryFrom<LanguageRepr> for Language {
    type Error = LogicError;
    fn try_from(r: LanguageRepr) -> Result<Self, LogicError> {
        Language::new(r.connectives)
    }
}

impl From<Language> for LanguageRepr {
    fn from(l: Language) -> Self {
        LanguageRepr {
            connectives: l.connectives,
        }
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '#')
        && !is_variable_name(name)
}

fn is_variable_name(name: &str) -> bool {
    name.strip_prefix('x')
        .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
}

impl Language {
    pub fn new(connectives: Vec<Connective>) -> Result<Self, LogicError> {
        let mut arity = BTreeMap::new();
        for c in &connectives {
            if !valid_name(&c.name) {
                return Err(LogicError::BadName { name: c.name.clone() });
            }
            if arity.insert(c.name.clone(), c.arity).is_some() {
                return Err(LogicError::DuplicateConnective { name: c.name.clone() });
            }
        }
        Ok(Language { connectives, arity })
    }

    pub fn empty() -> Self {
        Language::new(Vec::new()).unwrap()
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arity.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arity.contains_key(name)
    }

    pub fn check_formula(&self, f: &Formula) -> Result<(), LogicError> {
        match f {
            Formula::Var(i) if *i >= VAR_UNIVERSE => Err(LogicError::VariableOutOfRange { index: *i }),
            Formula::Var(_) => Ok(()),
            Formula::App(name, args) => {
                let expected = self
                    .arity(name)
                    .ok_or_else(|| LogicError::UnknownConnective { name: name.clone() })?;
                if expected != args.len() {
                    return Err(LogicError::ArityMismatch {
                        name: name.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_formula(a))
            }
        }
    }

    pub fn check_statement(&self, s: &Statement) -> Result<(), LogicError> {
        s.parts.iter().try_for_each(|f| self.check_formula(f))
    }

    /// Every connective of `self` is in `other` with the same arity.
    pub fn is_fragment_of(&self, other: &Language) -> bool {
        self.connectives
            .iter()
            .all(|c| other.arity(&c.name) == Some(c.arity))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(u32),
    App(String, Vec<Formula>),
}

impl Formula {
    pub fn var(i: u32) -> Self {
        Formula::Var(i)
    }

    pub fn app(name: impl Into<String>, args: Vec<Formula>) -> Self {
        Formula::App(name.into(), args)
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Formula::App(name.into(), Vec::new())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Nesting depth of connectives; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, args) => args.iter().map(|a| 1 + a.depth()).max().unwrap_or(0),
        }
    }

    pub fn head(&self) -> Option<&str> {
        match self {
            Formula::Var(_) => None,
            Formula::App(name, _) => Some(name),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Var(i) => {
                out.insert(*i);
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn collect_connectives(&self, out: &mut BTreeSet<String>) {
        if let Formula::App(name, args) = self {
            out.insert(name.clone());
            args.iter().for_each(|a| a.collect_connectives(out));
        }
    }

    /// Renames every connective.
    pub fn map_connectives(&self, rename: &impl Fn(&str) -> String) -> Formula {
        match self {
            Formula::Var(i) => Formula::Var(*i),
            Formula::App(name, args) => Formula::App(
                rename(name),
                args.iter().map(|a| a.map_connectives(rename)).collect(),
            ),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(i) => write!(f, "x{i}"),
            Formula::App(name, args) if args.is_empty() => f.write_str(name),
            Formula::App(name, args) => {
                write!(f, "{name}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A tuple of `m + n` formulas tagged with its type `(m, n)`. Plain
/// formulas have type `(0, 1)`; equations are written `a == b` and have
/// type `(2, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Statement {
    pub ty: (usize, usize),
    pub parts: Vec<Formula>,
}

pub const FORMULA_TYPE: (usize, usize) = (0, 1);
pub const EQUATION_TYPE: (usize, usize) = (2, 0);

impl Statement {
    pub fn new(ty: (usize, usize), parts: Vec<Formula>) -> Result<Self, LogicError> {
        if parts.len() != ty.0 + ty.1 {
            return Err(LogicError::TypeMismatch {
                expected: ty,
                found: parts.len(),
            });
        }
        Ok(Statement { ty, parts })
    }

    pub fn formula(f: Formula) -> Self {
        Statement {
            ty: FORMULA_TYPE,
            parts: vec![f],
        }
    }

    pub fn as_formula(&self) -> Option<&Formula> {
        (self.ty == FORMULA_TYPE).then(|| &self.parts[0])
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(Formula::size).sum()
    }

    pub fn max_formula_size(&self) -> usize {
        self.parts.iter().map(Formula::size).max().unwrap_or(0)
    }

    pub fn depth(&self) -> usize {
        self.parts.iter().map(Formula::depth).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.parts.iter().for_each(|f| f.collect_vars(&mut out));
        out
    }

    pub fn connectives(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.parts.iter().for_each(|f| f.collect_connectives(&mut out));
        out
    }

    pub fn map_connectives(&self, rename: &impl Fn(&str) -> String) -> Statement {
        Statement {
            ty: self.ty,
            parts: self.parts.iter().map(|f| f.map_connectives(rename)).collect(),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |fs: &[Formula]| fs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self.ty {
            FORMULA_TYPE => write!(f, "{}", self.parts[0]),
            EQUATION_TYPE => write!(f, "{} == {}", self.parts[0], self.parts[1]),
            (m, _) => {
                let (lhs, rhs) = self.parts.split_at(m);
                match (lhs.is_empty(), rhs.is_empty()) {
                    (true, true) => f.write_str("=>"),
                    (true, false) => write!(f, "=> {}", join(rhs)),
                    (false, true) => write!(f, "{} =>", join(lhs)),
                    (false, false) => write!(f, "{} => {}", join(lhs), join(rhs)),
                }
            }
        }
    }
}

macro_rules! string_serde {
    ($t:ty, $parse:path) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                $parse(&text).map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Formula, super::parse::parse_formula_raw);
string_serde!(Statement, super::parse::parse_statement_raw);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures() {
        let f = Formula::app("imp", vec![Formula::var(0), Formula::app("not", vec![Formula::var(1)])]);
        assert_eq!(f.size(), 4);
        assert_eq!(f.depth(), 2);
        assert_eq!(f.to_string(), "imp(x0,not(x1))");
        assert_eq!(Formula::constant("bot").depth(), 0);
    }

    #[test]
    fn language_rejects_duplicates_and_variable_names() {
        let c = |n: &str| Connective::new(n, 1);
        assert!(matches!(
            Language::new(vec![c("not"), c("not")]),
            Err(LogicError::DuplicateConnective { .. })
        ));
        assert!(matches!(Language::new(vec![c("x3")]), Err(LogicError::BadName { .. })));
        assert!(Language::new(vec![c("xor"), c("imp#1")]).is_ok());
    }

    #[test]
    fn statement_printing() {
        let x = |i| Formula::var(i);
        assert_eq!(Statement::new((2, 0), vec![x(0), x(1)]).unwrap().to_string(), "x0 == x1");
        assert_eq!(Statement::new((2, 1), vec![x(0), x(1), x(2)]).unwrap().to_string(), "x0, x1 => x2");
        assert_eq!(Statement::new((0, 0), vec![]).unwrap().to_string(), "=>");
        assert!(Statement::new((1, 1), vec![x(0)]).is_err());
    }
}
