//! Bounded proof search.
//!
//! Backward chaining with unification, iteratively deepened on the height
//! of the proof tree. Goal variables are rigid; each rule application gets
//! fresh metavariables. Whatever metavariables remain open in a finished
//! proof are set to `x0`, which is again a proof because every axiom and
//! rule is schematic.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::formula::{Formula, Statement};
use super::subst::Substitution;
use super::system::{DeductiveSystem, Derivation, Justification, Rule, Step};
use super::LogicError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest proof-tree height.
    pub depth: usize,
    /// Largest formula size (node count) anywhere in the proof.
    pub size: Option<usize>,
    /// Search nodes before giving up.
    pub nodes: u64,
}

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

impl Budget {
    pub fn depth(depth: usize) -> Self {
        Budget {
            depth,
            size: None,
            nodes: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn with_size(self, size: usize) -> Self {
        Budget {
            size: Some(size),
            ..self
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::depth(5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    /// The whole bounded search space was explored without success. This
    /// says nothing about derivability beyond the budget.
    NotFoundWithinBudget,
    /// The node budget ran out before the bounded space was exhausted.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub status: SearchStatus,
    pub budget: Budget,
    pub nodes: u64,
    /// Height of the returned proof, the least one possible.
    pub height: Option<usize>,
    pub derivation: Option<Derivation>,
}

impl SearchReport {
    pub fn found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

#[derive(Clone, Debug)]
enum Term {
    Obj(u32),
    Meta(u32),
    App(u16, Rc<[Term]>),
}

#[derive(Clone, Copy)]
enum Choice {
    Open,
    Premise,
    Rule { rule: usize, base: u32 },
}

struct Node {
    goal: Rc<[Term]>,
    choice: Choice,
    children: Vec<usize>,
}

enum Flow {
    Found,
    Failed,
    Exhausted,
}

struct Engine<'a> {
    rules: &'a [Rule],
    rule_vars: Vec<u32>,
    ids: HashMap<&'a str, u16>,
    names: Vec<&'a str>,
    premises: Vec<Rc<[Term]>>,
    bindings: Vec<Option<Term>>,
    trail: Vec<u32>,
    nodes: Vec<Node>,
    max_size: usize,
    visited: u64,
    node_budget: u64,
}

impl<'a> Engine<'a> {
    fn term(&self, f: &Formula, meta_base: Option<u32>) -> Term {
        match f {
            Formula::Var(v) => match meta_base {
                Some(b) => Term::Meta(b + v),
                None => Term::Obj(*v),
            },
            Formula::App(name, args) => Term::App(
                self.ids[name.as_str()],
                args.iter().map(|a| self.term(a, meta_base)).collect(),
            ),
        }
    }

    fn terms(&self, s: &Statement, meta_base: Option<u32>) -> Rc<[Term]> {
        s.parts.iter().map(|f| self.term(f, meta_base)).collect()
    }

    fn deref<'t>(&'t self, mut t: &'t Term) -> &'t Term {
        while let Term::Meta(m) = t {
            match &self.bindings[*m as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, m: u32, t: &Term) -> bool {
        match self.deref(t) {
            Term::Meta(n) => *n == m,
            Term::Obj(_) => false,
            Term::App(_, args) => args.iter().any(|a| self.occurs(m, a)),
        }
    }

    fn bind(&mut self, m: u32, t: Term) {
        self.bindings[m as usize] = Some(t);
        self.trail.push(m);
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let (a, b) = (self.deref(a).clone(), self.deref(b).clone());
        match (&a, &b) {
            (Term::Meta(x), Term::Meta(y)) if x == y => true,
            (Term::Meta(x), _) => {
                if self.occurs(*x, &b) {
                    return false;
                }
                self.bind(*x, b);
                true
            }
            (_, Term::Meta(y)) => {
                if self.occurs(*y, &a) {
                    return false;
                }
                self.bind(*y, a);
                true
            }
            (Term::Obj(x), Term::Obj(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn unify_all(&mut self, a: &[Term], b: &[Term]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.unify(x, y))
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let m = self.trail.pop().unwrap();
            self.bindings[m as usize] = None;
        }
    }

    fn size(&self, t: &Term) -> usize {
        match self.deref(t) {
            Term::App(_, args) => 1 + args.iter().map(|a| self.size(a)).sum::<usize>(),
            _ => 1,
        }
    }

    /// Non-metavariable nodes; goals with more fixed structure go first.
    fn rigidity(&self, t: &Term) -> usize {
        match self.deref(t) {
            Term::Meta(_) => 0,
            Term::Obj(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(|a| self.rigidity(a)).sum::<usize>(),
        }
    }

    fn too_big(&self, goal: &[Term]) -> bool {
        goal.iter().any(|t| self.size(t) > self.max_size)
    }

    fn solve(&mut self, agenda: &mut Vec<(usize, usize)>) -> Flow {
        if agenda.is_empty() {
            return Flow::Found;
        }
        self.visited += 1;
        if self.visited > self.node_budget {
            return Flow::Exhausted;
        }
        let k = (0..agenda.len())
            .max_by_key(|&i| {
                let g = &self.nodes[agenda[i].0].goal;
                (g.iter().map(|t| self.rigidity(t)).sum::<usize>(), std::cmp::Reverse(i))
            })
            .unwrap();
        let (node, height) = agenda.remove(k);
        let goal = self.nodes[node].goal.clone();
        let flow = self.expand(node, &goal, height, agenda);
        if !matches!(flow, Flow::Found) {
            agenda.insert(k, (node, height));
        }
        flow
    }

    fn expand(&mut self, node: usize, goal: &Rc<[Term]>, height: usize, agenda: &mut Vec<(usize, usize)>) -> Flow {
        if self.too_big(goal) {
            return Flow::Failed;
        }
        for p in 0..self.premises.len() {
            let mark = self.trail.len();
            let premise = self.premises[p].clone();
            if self.unify_all(goal, &premise) {
                self.nodes[node].choice = Choice::Premise;
                match self.solve(agenda) {
                    Flow::Failed => {}
                    other => return other,
                }
            }
            self.undo(mark);
        }
        for r in 0..self.rules.len() {
            let rule = &self.rules[r];
            if !rule.premises.is_empty() && height < 2 {
                continue;
            }
            let base = self.bindings.len() as u32;
            self.bindings.resize(base as usize + self.rule_vars[r] as usize, None);
            let mark = self.trail.len();
            let conclusion = self.terms(&rule.conclusion, Some(base));
            let mut flow = Flow::Failed;
            if self.unify_all(goal, &conclusion) {
                let children: Vec<Rc<[Term]>> = rule.premises.iter().map(|p| self.terms(p, Some(base))).collect();
                if !children.iter().any(|c| self.too_big(c)) {
                    let first = self.nodes.len();
                    for c in children {
                        self.nodes.push(Node {
                            goal: c,
                            choice: Choice::Open,
                            children: Vec::new(),
                        });
                        agenda.push((self.nodes.len() - 1, height - 1));
                    }
                    self.nodes[node].choice = Choice::Rule { rule: r, base };
                    self.nodes[node].children = (first..self.nodes.len()).collect();
                    flow = self.solve(agenda);
                    if !matches!(flow, Flow::Found) {
                        agenda.retain(|&(n, _)| n < first);
                        self.nodes.truncate(first);
                        self.nodes[node].children.clear();
                    }
                }
            }
            if matches!(flow, Flow::Found) {
                return flow;
            }
            self.undo(mark);
            self.bindings.truncate(base as usize);
            if matches!(flow, Flow::Exhausted) {
                return flow;
            }
        }
        self.nodes[node].choice = Choice::Open;
        Flow::Failed
    }

    fn formula(&self, t: &Term) -> Formula {
        match self.deref(t) {
            Term::Obj(v) => Formula::Var(*v),
            Term::Meta(_) => Formula::Var(0),
            Term::App(id, args) => Formula::App(
                self.names[*id as usize].to_string(),
                args.iter().map(|a| self.formula(a)).collect(),
            ),
        }
    }

    fn statement(&self, ty: (usize, usize), goal: &[Term]) -> Statement {
        Statement {
            ty,
            parts: goal.iter().map(|t| self.formula(t)).collect(),
        }
    }

    fn emit(
        &self,
        node: usize,
        ty: (usize, usize),
        axiom_count: usize,
        steps: &mut Vec<Step>,
        seen: &mut HashMap<Statement, usize>,
    ) -> usize {
        let n = &self.nodes[node];
        let statement = self.statement(ty, &n.goal);
        if let Some(&i) = seen.get(&statement) {
            return i;
        }
        let justification = match n.choice {
            Choice::Open | Choice::Premise => Justification::Premise,
            Choice::Rule { rule, base } => {
                let pairs = (0..self.rule_vars[rule]).map(|v| (v, self.formula(&Term::Meta(base + v))));
                let subst = Substitution::from_pairs(pairs).expect("variables in range");
                if rule < axiom_count {
                    Justification::Axiom { index: rule, subst }
                } else {
                    let premises = n
                        .children
                        .iter()
                        .map(|&c| self.emit(c, ty, axiom_count, steps, seen))
                        .collect();
                    Justification::Rule {
                        index: rule - axiom_count,
                        subst,
                        premises,
                    }
                }
            }
        };
        steps.push(Step {
            statement: statement.clone(),
            justification,
        });
        seen.insert(statement, steps.len() - 1);
        steps.len() - 1
    }
}

/// Searches for a derivation of `goal` from `premises` whose proof tree has
/// height at most `budget.depth`, trying heights in increasing order.
/// Within a height, premises are tried first, then axioms and rules in
/// declaration order.
pub fn derive(
    system: &DeductiveSystem,
    premises: &[Statement],
    goal: &Statement,
    budget: Budget,
) -> Result<SearchReport, LogicError> {
    for s in premises.iter().chain(std::iter::once(goal)) {
        system.check_statement(s)?;
    }
    let rules = system.all_rules();
    let names: Vec<&str> = system.language().connectives().iter().map(|c| c.name.as_str()).collect();
    let ids = names.iter().enumerate().map(|(i, &n)| (n, i as u16)).collect();
    let rule_vars = rules
        .iter()
        .map(|r| r.statements().flat_map(Statement::vars).max().map_or(0, |v| v + 1))
        .collect();
    let mut engine = Engine {
        rules: &rules,
        rule_vars,
        ids,
        names,
        premises: Vec::new(),
        bindings: Vec::new(),
        trail: Vec::new(),
        nodes: Vec::new(),
        max_size: budget.size.unwrap_or(usize::MAX),
        visited: 0,
        node_budget: budget.nodes,
    };
    engine.premises = premises.iter().map(|p| engine.terms(p, None)).collect();
    let root_goal = engine.terms(goal, None);
    let mut status = SearchStatus::NotFoundWithinBudget;
    let mut height = None;
    for h in 1..=budget.depth {
        engine.nodes.clear();
        engine.nodes.push(Node {
            goal: root_goal.clone(),
            choice: Choice::Open,
            children: Vec::new(),
        });
        match engine.solve(&mut vec![(0, h)]) {
            Flow::Found => {
                status = SearchStatus::Found;
                height = Some(h);
                break;
            }
            Flow::Exhausted => {
                status = SearchStatus::BudgetExceeded;
                break;
            }
            Flow::Failed => {}
        }
    }
    let derivation = (status == SearchStatus::Found).then(|| {
        let mut steps = Vec::new();
        engine.emit(0, goal.ty, system.axioms().len(), &mut steps, &mut HashMap::new());
        Derivation { steps }
    });
    Ok(SearchReport {
        status,
        budget,
        nodes: engine.visited,
        height,
        derivation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::cpl;
    use crate::logic::parse::parse_statement_raw as p;
    use crate::logic::system::check_derivation_of;

    #[test]
    fn identity_in_five_lines() {
        let s = cpl::lukasiewicz();
        let goal = p("imp(x0,x0)").unwrap();
        let r = derive(&s, &[], &goal, Budget::depth(5)).unwrap();
        assert!(r.found());
        assert_eq!(r.height, Some(3));
        let d = r.derivation.unwrap();
        assert_eq!(d.len(), 5);
        check_derivation_of(&s, &[], &goal, &d).unwrap();
    }

    #[test]
    fn premise_in_one_step() {
        let s = cpl::lukasiewicz();
        let psi = p("not(imp(x1,x2))").unwrap();
        let r = derive(&s, std::slice::from_ref(&psi), &psi, Budget::depth(3)).unwrap();
        assert_eq!(r.derivation.unwrap().len(), 1);
        assert_eq!(r.height, Some(1));
    }

    #[test]
    fn exhausts_small_spaces() {
        let s = cpl::lukasiewicz();
        let r = derive(&s, &[], &p("x0").unwrap(), Budget::depth(3).with_size(7)).unwrap();
        assert_eq!(r.status, SearchStatus::NotFoundWithinBudget);
        let tight = Budget {
            nodes: 3,
            ..Budget::depth(4)
        };
        let r = derive(&s, &[], &p("imp(x0,x0)").unwrap(), tight).unwrap();
        assert_eq!(r.status, SearchStatus::BudgetExceeded);
    }

    #[test]
    fn modus_ponens_from_premises() {
        let s = cpl::lukasiewicz();
        let premises = [p("x0").unwrap(), p("imp(x0,not(x1))").unwrap()];
        let goal = p("not(x1)").unwrap();
        let r = derive(&s, &premises, &goal, Budget::depth(2)).unwrap();
        let d = r.derivation.unwrap();
        check_derivation_of(&s, &premises, &goal, &d).unwrap();
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn rejects_foreign_goals() {
        let s = cpl::lukasiewicz();
        assert!(derive(&s, &[], &p("and(x0,x0)").unwrap(), Budget::depth(2)).is_err());
    }
}
