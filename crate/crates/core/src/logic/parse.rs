//! The text grammar:
//!
//! ```text
//! statement := formula
//!            | formula "==" formula
//!            | [formula ("," formula)*] "=>" [formula ("," formula)*]
//! formula   := "x" digits | name | name "(" [formula ("," formula)*] ")"
//! ```

use super::formula::{Formula, Language, Statement, EQUATION_TYPE, FORMULA_TYPE, VAR_UNIVERSE};
use super::LogicError;

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> LogicError {
        LogicError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn name(&mut self) -> Result<&'a str, LogicError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| {
                !(c.is_ascii_alphanumeric() || c == '_' || (i > 0 && c == '#'))
            })
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 || rest.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.error("expected a name or variable"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let start = self.pos;
        let name = self.name()?;
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                let index: u32 = digits.parse().map_err(|_| LogicError::VariableOutOfRange { index: u32::MAX })?;
                if index >= VAR_UNIVERSE {
                    return Err(LogicError::VariableOutOfRange { index });
                }
                return Ok(Formula::Var(index));
            }
        }
        let mut args = Vec::new();
        if self.eat("(")
            && !self.eat(")") {
                loop {
                    args.push(self.formula()?);
                    if self.eat(")") {
                        break;
                    }
                    if !self.eat(",") {
                        return Err(self.error(format!("expected ',' or ')' in arguments of the term at {start}")));
                    }
                }
            }
        Ok(Formula::App(name.to_string(), args))
    }

    fn formula_list(&mut self) -> Result<Vec<Formula>, LogicError> {
        let mut out = Vec::new();
        if self.at_end() || self.text[self.pos..].starts_with("=>") {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn statement(&mut self) -> Result<Statement, LogicError> {
        let lhs = self.formula_list()?;
        let s = if self.eat("=>") {
            let rhs = self.formula_list()?;
            let ty = (lhs.len(), rhs.len());
            Statement::new(ty, lhs.into_iter().chain(rhs).collect())?
        } else if lhs.len() == 1 && self.eat("==") {
            let rhs = self.formula()?;
            Statement::new(EQUATION_TYPE, vec![lhs.into_iter().next().unwrap(), rhs])?
        } else if lhs.len() == 1 {
            Statement::new(FORMULA_TYPE, lhs)?
        } else {
            return Err(self.error("expected a formula, an equation or a sequent"));
        };
        if !self.at_end() {
            return Err(self.error("trailing input"));
        }
        Ok(s)
    }
}

/// Parses without checking connectives against a language.
pub fn parse_formula_raw(text: &str) -> Result<Formula, LogicError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

pub fn parse_statement_raw(text: &str) -> Result<Statement, LogicError> {
    Parser::new(text).statement()
}

pub fn parse_formula(text: &str, language: &Language) -> Result<Formula, LogicError> {
    let f = parse_formula_raw(text)?;
    language.check_formula(&f)?;
    Ok(f)
}

pub fn parse_statement(text: &str, language: &Language) -> Result<Statement, LogicError> {
    let s = parse_statement_raw(text)?;
    language.check_statement(&s)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::Connective;

    fn cpl() -> Language {
        Language::new(vec![Connective::new("imp", 2), Connective::new("not", 1)]).unwrap()
    }

    #[test]
    fn formulas() {
        let l = cpl();
        let f = parse_formula("imp(x0,x0)", &l).unwrap();
        assert_eq!(f, Formula::app("imp", vec![Formula::var(0), Formula::var(0)]));
        let g = parse_formula(" not( imp(x0, x1) ) ", &l).unwrap();
        assert_eq!(g.to_string(), "not(imp(x0,x1))");
        assert!(matches!(
            parse_formula("imp(x0)", &l),
            Err(LogicError::ArityMismatch { expected: 2, found: 1, .. })
        ));
        assert!(matches!(parse_formula("and(x0,x1)", &l), Err(LogicError::UnknownConnective { .. })));
        assert!(matches!(parse_formula("x16", &l), Err(LogicError::VariableOutOfRange { index: 16 })));
        assert!(matches!(parse_formula("imp(x0,x1", &l), Err(LogicError::Syntax { .. })));
        assert!(matches!(parse_formula("imp(x0,x1) x2", &l), Err(LogicError::Syntax { .. })));
    }

    #[test]
    fn constants_with_and_without_parentheses() {
        assert_eq!(parse_formula_raw("bot").unwrap(), parse_formula_raw("bot()").unwrap());
        assert_eq!(parse_formula_raw("imp#2(x0,top)").unwrap().to_string(), "imp#2(x0,top)");
    }

    #[test]
    fn statements_round_trip() {
        for text in ["imp(x0,x1)", "x0 == not(x1)", "x0, x1 => x2", "=> x0, x1", "x0 =>", "=>"] {
            let s = parse_statement_raw(text).unwrap();
            assert_eq!(s.to_string(), text);
            assert_eq!(parse_statement_raw(&s.to_string()).unwrap(), s);
        }
        assert_eq!(parse_statement_raw("x0 => x1").unwrap().ty, (1, 1));
        // a sequent with one succedent and no antecedent is a formula
        assert_eq!(parse_statement_raw("=> x0").unwrap(), parse_statement_raw("x0").unwrap());
        assert!(parse_statement_raw("x0, x1").is_err());
    }
}
