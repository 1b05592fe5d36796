//! The closure operator `Φ ↦ {ψ : Φ ⊢ ψ}` cut down to a finite universe
//! of statements and a fixed search budget.
//!
//! `γ(Φ)` is the least `Γ ⊇ Φ` inside the universe such that every universe
//! statement derivable from `Γ` within the budget is already in `Γ`. Being
//! a least fixed point, it is extensive, monotone and idempotent exactly.

use std::collections::{BTreeSet, HashMap};

use super::derive::{derive, Budget, SearchStatus};
use super::formula::{Formula, Language, Statement, FORMULA_TYPE};
use super::subst::Substitution;
use super::system::DeductiveSystem;
use super::LogicError;

/// Largest universe materialized.
pub const UNIVERSE_BOUND: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    statements: Vec<Statement>,
    index: HashMap<Statement, usize>,
}

impl Universe {
    pub fn new(statements: Vec<Statement>) -> Result<Self, LogicError> {
        if statements.len() > UNIVERSE_BOUND {
            return Err(LogicError::UniverseTooLarge {
                size: statements.len(),
                bound: UNIVERSE_BOUND,
            });
        }
        let index = statements.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Universe { statements, index })
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn get(&self, i: usize) -> &Statement {
        &self.statements[i]
    }

    pub fn index_of(&self, s: &Statement) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Indices of `σ·Φ`, or `None` if some image leaves the universe.
    pub fn substitute(&self, sigma: &Substitution, phi: &BTreeSet<usize>) -> Option<BTreeSet<usize>> {
        phi.iter().map(|&i| self.index_of(&sigma.apply(&self.statements[i]))).collect()
    }
}

/// All formulas of depth at most `max_depth` over `x0 … x{vars-1}`, by
/// depth and then in generation order.
pub fn formula_universe(language: &Language, max_depth: usize, vars: u32) -> Result<Universe, LogicError> {
    let mut layers: Vec<Vec<Formula>> = vec![(0..vars).map(Formula::Var).collect()];
    layers[0].extend(
        language
            .connectives()
            .iter()
            .filter(|c| c.arity == 0)
            .map(|c| Formula::constant(c.name.clone())),
    );
    let mut all: Vec<Formula> = layers[0].clone();
    for d in 1..=max_depth {
        let mut layer = Vec::new();
        for c in language.connectives().iter().filter(|c| c.arity > 0) {
            // argument tuples over `all` with at least one argument of depth d - 1
            let mut tuples: Vec<Vec<Formula>> = vec![Vec::new()];
            for _ in 0..c.arity {
                let mut next = Vec::new();
                for t in &tuples {
                    for f in &all {
                        let mut t2 = t.clone();
                        t2.push(f.clone());
                        next.push(t2);
                    }
                }
                if next.len() > UNIVERSE_BOUND * 4 {
                    return Err(LogicError::UniverseTooLarge {
                        size: next.len(),
                        bound: UNIVERSE_BOUND,
                    });
                }
                tuples = next;
            }
            for args in tuples {
                if args.iter().any(|a| a.depth() + 1 == d) {
                    layer.push(Formula::App(c.name.clone(), args));
                }
            }
        }
        all.extend(layer.iter().cloned());
        if all.len() > UNIVERSE_BOUND {
            return Err(LogicError::UniverseTooLarge {
                size: all.len(),
                bound: UNIVERSE_BOUND,
            });
        }
        layers.push(layer);
    }
    Universe::new(all.into_iter().map(Statement::formula).collect())
}

pub struct BoundedNucleus<'a> {
    system: &'a DeductiveSystem,
    universe: Universe,
    budget: Budget,
}

impl<'a> BoundedNucleus<'a> {
    /// Formula systems only; the universe is built by [`formula_universe`].
    pub fn new(system: &'a DeductiveSystem, max_depth: usize, vars: u32, budget: Budget) -> Result<Self, LogicError> {
        if system.statement_type() != FORMULA_TYPE {
            return Err(LogicError::TypeMismatch {
                expected: FORMULA_TYPE,
                found: system.statement_type().0 + system.statement_type().1,
            });
        }
        let universe = formula_universe(system.language(), max_depth, vars)?;
        Ok(BoundedNucleus {
            system,
            universe,
            budget,
        })
    }

    pub fn with_universe(system: &'a DeductiveSystem, universe: Universe, budget: Budget) -> Self {
        BoundedNucleus {
            system,
            universe,
            budget,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn close(&self, phi: &BTreeSet<usize>) -> Result<BTreeSet<usize>, LogicError> {
        let mut current = phi.clone();
        loop {
            let premises: Vec<Statement> = current.iter().map(|&i| self.universe.get(i).clone()).collect();
            let mut added = Vec::new();
            for (i, s) in self.universe.statements().iter().enumerate() {
                if current.contains(&i) {
                    continue;
                }
                let r = derive(self.system, &premises, s, self.budget)?;
                match r.status {
                    SearchStatus::Found => added.push(i),
                    SearchStatus::NotFoundWithinBudget => {}
                    SearchStatus::BudgetExceeded => {
                        return Err(LogicError::BudgetExceeded {
                            statement: s.to_string(),
                        })
                    }
                }
            }
            if added.is_empty() {
                return Ok(current);
            }
            current.extend(added);
        }
    }

    pub fn close_statements(&self, phi: &[Statement]) -> Result<Vec<Statement>, LogicError> {
        let ids = phi
            .iter()
            .map(|s| {
                self.universe.index_of(s).ok_or_else(|| LogicError::BadStep {
                    index: 0,
                    reason: format!("{s} is outside the universe"),
                })
            })
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(self.close(&ids)?.into_iter().map(|i| self.universe.get(i).clone()).collect())
    }

    /// `{σu : u ∈ γ(Φ)} ∩ U ⊆ γ(σ·Φ)`, checked when `σ·Φ` stays in the
    /// universe; `None` when it does not.
    pub fn structural_at(&self, sigma: &Substitution, phi: &BTreeSet<usize>) -> Result<Option<bool>, LogicError> {
        let Some(sphi) = self.universe.substitute(sigma, phi) else {
            return Ok(None);
        };
        let closed = self.close(phi)?;
        let target = self.close(&sphi)?;
        Ok(Some(closed.iter().all(|&u| {
            self.universe
                .index_of(&sigma.apply(self.universe.get(u)))
                .is_none_or(|v| target.contains(&v))
        })))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::cpl;
    use crate::logic::parse::parse_statement_raw as p;

    #[test]
    fn universe_sizes() {
        let l = cpl::language();
        let sizes: Vec<usize> = (0..4).map(|d| formula_universe(&l, d, 1).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 3, 13, 183]);
        assert!(matches!(formula_universe(&l, 4, 2), Err(LogicError::UniverseTooLarge { .. })));
    }

    #[test]
    fn empty_system_is_identity() {
        let s = cpl::lukasiewicz().with_rules("empty", vec![], vec![]).unwrap();
        let g = BoundedNucleus::new(&s, 2, 1, Budget::depth(3)).unwrap();
        let phi: BTreeSet<usize> = [1, 4].into();
        assert_eq!(g.close(&phi).unwrap(), phi);
    }

    #[test]
    fn identity_is_a_theorem_at_depth_two() {
        let s = cpl::lukasiewicz();
        let g = BoundedNucleus::new(&s, 2, 1, Budget::depth(3)).unwrap();
        let theorems = g.close(&BTreeSet::new()).unwrap();
        let id = g.universe().index_of(&p("imp(x0,x0)").unwrap()).unwrap();
        assert!(theorems.contains(&id));
        assert_eq!(g.close(&theorems).unwrap(), theorems);
    }
}
