//! Seeded random formulas and substitutions for property runs.

use rand::seq::SliceRandom;
use rand::Rng;

use super::formula::{Formula, Language};
use super::subst::Substitution;

pub fn formula<R: Rng>(rng: &mut R, language: &Language, max_depth: usize, vars: u32) -> Formula {
    let usable: Vec<_> = language.connectives().iter().filter(|c| max_depth > 0 || c.arity == 0).collect();
    if usable.is_empty() || rng.gen_bool(0.3) {
        return Formula::Var(rng.gen_range(0..vars));
    }
    let c = usable.choose(rng).unwrap();
    let args = (0..c.arity)
        .map(|_| formula(rng, language, max_depth.saturating_sub(1), vars))
        .collect();
    Formula::App(c.name.clone(), args)
}

/// Each of `x0 … x{vars-1}` is moved with probability one half.
pub fn substitution<R: Rng>(rng: &mut R, language: &Language, max_depth: usize, vars: u32) -> Substitution {
    let mut pairs = Vec::new();
    for v in 0..vars {
        if rng.gen_bool(0.5) {
            pairs.push((v, formula(rng, language, max_depth, vars)));
        }
    }
    Substitution::from_pairs(pairs).expect("variables in range")
}

/// Sends each of `x0 … x{vars-1}` to a variable.
pub fn variable_substitution<R: Rng>(rng: &mut R, vars: u32) -> Substitution {
    Substitution::from_pairs((0..vars).map(|v| (v, Formula::Var(rng.gen_range(0..vars))))).expect("variables in range")
}
