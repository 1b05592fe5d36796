//! Backtracking over maps between finite lattices: enumeration of
//! join-preserving maps with extra structure, and isomorphism search.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::order::{FinSupLattice, SupMap};

/// Default per-instance budget for isomorphism search.
pub const ISO_BUDGET: Duration = Duration::from_secs(10);

/// Enumerates all join-preserving maps `source → target` that satisfy
/// `consistent`, in lexicographic order of their tables.
///
/// Elements are assigned along a linear extension of `source`. An element
/// that is the join of two strictly smaller elements gets its value forced;
/// only join-irreducibles branch. `consistent` is called after each
/// assignment with the partial table and the element just assigned, and must
/// reject as soon as a constraint involving only assigned elements fails.
pub fn enumerate_join_maps<F>(
    source: &FinSupLattice,
    target: &FinSupLattice,
    fixed: &[(usize, usize)],
    mut consistent: F,
) -> Vec<SupMap>
where
    F: FnMut(&[Option<usize>], usize) -> bool,
{
    let n = source.len();
    let order = source.linear_extension();
    // pairs (y, z), y < z, with y ∨ z = x and both strictly below x
    let mut join_pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for y in 0..n {
        for z in y + 1..n {
            let x = source.join(y, z);
            if x != y && x != z {
                join_pairs[x].push((y, z));
            }
        }
    }
    let below: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| y != x && source.leq(y, x)).collect())
        .collect();
    let mut fixed_value = vec![None; n];
    for &(x, v) in fixed {
        fixed_value[x] = Some(v);
    }

    struct Ctx<'a, F> {
        source: &'a FinSupLattice,
        target: &'a FinSupLattice,
        order: Vec<usize>,
        join_pairs: Vec<Vec<(usize, usize)>>,
        below: Vec<Vec<usize>>,
        fixed_value: Vec<Option<usize>>,
        consistent: F,
        assignment: Vec<Option<usize>>,
        out: Vec<SupMap>,
    }

    fn go<F: FnMut(&[Option<usize>], usize) -> bool>(ctx: &mut Ctx<'_, F>, pos: usize) {
        if pos == ctx.order.len() {
            let table = ctx.assignment.iter().map(|v| v.unwrap()).collect();
            ctx.out.push(SupMap { table });
            return;
        }
        let x = ctx.order[pos];
        let candidates: Vec<usize> = if x == ctx.source.bottom() {
            vec![ctx.target.bottom()]
        } else if let Some(&(y, z)) = ctx.join_pairs[x].first() {
            let fy = ctx.assignment[y].unwrap();
            let fz = ctx.assignment[z].unwrap();
            vec![ctx.target.join(fy, fz)]
        } else {
            let lower = ctx
                .target
                .join_all(ctx.below[x].iter().map(|&y| ctx.assignment[y].unwrap()));
            ctx.target
                .elements()
                .filter(|&v| ctx.target.leq(lower, v))
                .collect()
        };
        for v in candidates {
            if let Some(w) = ctx.fixed_value[x] {
                if w != v {
                    continue;
                }
            }
            ctx.assignment[x] = Some(v);
            let joins_ok = ctx.join_pairs[x].iter().all(|&(y, z)| {
                ctx.target
                    .join(ctx.assignment[y].unwrap(), ctx.assignment[z].unwrap())
                    == v
            }) && ctx.below[x]
                .iter()
                .all(|&y| ctx.target.leq(ctx.assignment[y].unwrap(), v));
            if joins_ok && (ctx.consistent)(&ctx.assignment, x) {
                go(ctx, pos + 1);
            }
            ctx.assignment[x] = None;
        }
    }

    let mut ctx = Ctx {
        source,
        target,
        order,
        join_pairs,
        below,
        fixed_value,
        consistent: &mut consistent,
        assignment: vec![None; n],
        out: Vec::new(),
    };
    go(&mut ctx, 0);
    let mut out = ctx.out;
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IsoOutcome {
    Isomorphic { map: Vec<usize> },
    NotIsomorphic,
    Inconclusive { budget_ms: u128 },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. })
    }

    pub fn map(&self) -> Option<&[usize]> {
        match self {
            IsoOutcome::Isomorphic { map } => Some(map),
            _ => None,
        }
    }
}

/// Searches for an order isomorphism `a → b` accepted by `consistent`, which
/// is called after each assignment like in [`enumerate_join_maps`].
pub fn find_isomorphism<F>(
    a: &FinSupLattice,
    b: &FinSupLattice,
    budget: Duration,
    mut consistent: F,
) -> IsoOutcome
where
    F: FnMut(&[Option<usize>], usize) -> bool,
{
    let n = a.len();
    if n != b.len() {
        return IsoOutcome::NotIsomorphic;
    }
    let signature = |l: &FinSupLattice, x: usize| {
        let down = l.elements().filter(|&y| l.leq(y, x)).count();
        let up = l.elements().filter(|&y| l.leq(x, y)).count();
        (down, up)
    };
    let sig_a: Vec<_> = a.elements().map(|x| signature(a, x)).collect();
    let sig_b: Vec<_> = b.elements().map(|x| signature(b, x)).collect();
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return IsoOutcome::NotIsomorphic;
        }
    }

    let order = a.linear_extension();
    let started = Instant::now();
    let mut nodes = 0u64;
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    let mut timed_out = false;

    #[allow(clippy::too_many_arguments)]
    fn go<F: FnMut(&[Option<usize>], usize) -> bool>(
        pos: usize,
        a: &FinSupLattice,
        b: &FinSupLattice,
        order: &[usize],
        sig_a: &[(usize, usize)],
        sig_b: &[(usize, usize)],
        assignment: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        consistent: &mut F,
        started: Instant,
        budget: Duration,
        nodes: &mut u64,
        timed_out: &mut bool,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        *nodes += 1;
        if (*nodes).is_multiple_of(1024) && started.elapsed() > budget {
            *timed_out = true;
            return false;
        }
        let x = order[pos];
        for v in b.elements() {
            if used[v] || sig_a[x] != sig_b[v] {
                continue;
            }
            let order_ok = order[..pos].iter().all(|&y| {
                let w = assignment[y].unwrap();
                a.leq(x, y) == b.leq(v, w) && a.leq(y, x) == b.leq(w, v)
            });
            if !order_ok {
                continue;
            }
            assignment[x] = Some(v);
            used[v] = true;
            if consistent(assignment, x)
                && go(
                    pos + 1,
                    a,
                    b,
                    order,
                    sig_a,
                    sig_b,
                    assignment,
                    used,
                    consistent,
                    started,
                    budget,
                    nodes,
                    timed_out,
                )
            {
                return true;
            }
            assignment[x] = None;
            used[v] = false;
            if *timed_out {
                return false;
            }
        }
        false
    }

    let found = go(
        0,
        a,
        b,
        &order,
        &sig_a,
        &sig_b,
        &mut assignment,
        &mut used,
        &mut consistent,
        started,
        budget,
        &mut nodes,
        &mut timed_out,
    );
    if found {
        IsoOutcome::Isomorphic {
            map: assignment.into_iter().map(|v| v.unwrap()).collect(),
        }
    } else if timed_out {
        IsoOutcome::Inconclusive {
            budget_ms: budget.as_millis(),
        }
    } else {
        IsoOutcome::NotIsomorphic
    }
}

pub fn lattice_isomorphism(a: &FinSupLattice, b: &FinSupLattice) -> IsoOutcome {
    find_isomorphism(a, b, ISO_BUDGET, |_, _| true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_join_map(f: &[usize], s: &FinSupLattice, t: &FinSupLattice) -> bool {
        f[s.bottom()] == t.bottom()
            && s.elements().all(|a| {
                s.elements()
                    .all(|b| f[s.join(a, b)] == t.join(f[a], f[b]))
            })
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let sources = [FinSupLattice::chain(3), FinSupLattice::powerset(2)];
        let targets = [FinSupLattice::chain(4), FinSupLattice::powerset(2)];
        for s in &sources {
            for t in &targets {
                let got: Vec<Vec<usize>> = enumerate_join_maps(s, t, &[], |_, _| true)
                    .into_iter()
                    .map(|m| m.table)
                    .collect();
                let mut expected = Vec::new();
                let total = t.len().pow(s.len() as u32);
                for code in 0..total {
                    let table: Vec<usize> = (0..s.len())
                        .map(|i| code / t.len().pow(i as u32) % t.len())
                        .collect();
                    if is_join_map(&table, s, t) {
                        expected.push(table);
                    }
                }
                expected.sort();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn chain_and_powerset_are_distinguished() {
        let four = FinSupLattice::chain(4);
        let square = FinSupLattice::powerset(2);
        assert_eq!(lattice_isomorphism(&four, &square), IsoOutcome::NotIsomorphic);
        assert!(lattice_isomorphism(&square, &square).is_isomorphic());
    }
}
