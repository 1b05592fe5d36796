//! Second implementations of the quotient constructions, by explicit
//! congruence closure. Nothing outside tests and the `suite` report uses
//! these; they exist to cross-check the saturation engine.

use petgraph::unionfind::UnionFind;

use crate::module::FinModule;
use crate::order::{check_suplattice, FinSupLattice};

/// Largest `|M₁|·|M₂|` the tensor oracle accepts (it materializes every
/// subset of pairs).
pub const TENSOR_ORACLE_BOUND: usize = 16;

/// Greatest element of each class of the congruence on `M` generated by
/// `relation`, indexed by element.
///
/// The congruence is the equivalence closure of
/// `{(a·v ∨ c, a·w ∨ c) : (v, w) ∈ relation, a ∈ Q, c ∈ M}`.
pub fn module_congruence_tops(m: &FinModule, relation: &[(usize, usize)]) -> Vec<usize> {
    let n = m.len();
    let mut uf = UnionFind::<usize>::new(n);
    for &(v, w) in relation {
        for a in m.scalars().elements() {
            let (av, aw) = (m.act(a, v), m.act(a, w));
            for c in m.elements() {
                uf.union(m.join(av, c), m.join(aw, c));
            }
        }
    }
    class_tops(n, |x| uf.find(x), |acc, x| m.join(acc, x), m.bottom())
}

fn class_tops(
    n: usize,
    find: impl Fn(usize) -> usize,
    join: impl Fn(usize, usize) -> usize,
    bottom: usize,
) -> Vec<usize> {
    let mut top = vec![bottom; n];
    for x in 0..n {
        let r = find(x);
        top[r] = join(top[r], x);
    }
    (0..n).map(|x| top[find(x)]).collect()
}

/// The tensor product as congruence classes on all subsets of `M₁ × M₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorOracle {
    /// Class maxima, sorted by (size, mask).
    pub tops: Vec<u64>,
    /// The quotient order on the classes.
    pub lattice: FinSupLattice,
}

/// Builds every subset of pairs and merges them along the translates
/// `(V ∪ C, W ∪ C)` of the full defining relation: `{(⋁X, y)} ~ X × {y}`,
/// `{(x, ⋁Y)} ~ {x} × Y` for all subsets `X`, `Y`, and
/// `{(x·a, y)} ~ {(x, a·y)}`. Returns `None` above the size bound.
pub fn tensor_by_congruence(m1: &FinModule, m2: &FinModule) -> Option<TensorOracle> {
    let (n1, n2) = (m1.len(), m2.len());
    let size = n1 * n2;
    if size > TENSOR_ORACLE_BOUND {
        return None;
    }
    let bit = |x: usize, y: usize| 1usize << (x * n2 + y);
    let mut relation: Vec<(usize, usize)> = Vec::new();
    for y in 0..n2 {
        for xs in 0usize..1 << n1 {
            let members = (0..n1).filter(|i| xs >> i & 1 == 1);
            let top = m1.lattice().join_all(members.clone());
            relation.push((bit(top, y), members.map(|x| bit(x, y)).sum()));
        }
    }
    for x in 0..n1 {
        for ys in 0usize..1 << n2 {
            let members = (0..n2).filter(|j| ys >> j & 1 == 1);
            let top = m2.lattice().join_all(members.clone());
            relation.push((bit(x, top), members.map(|y| bit(x, y)).sum()));
        }
    }
    for a in m1.scalars().elements() {
        for x in 0..n1 {
            for y in 0..n2 {
                relation.push((bit(m1.act(a, x), y), bit(x, m2.act(a, y))));
            }
        }
    }
    let full = (1usize << size) - 1;
    let mut uf = UnionFind::<usize>::new(1 << size);
    for &(v, w) in &relation {
        let rest = full & !(v | w);
        // all subsets c of rest
        let mut c = rest;
        loop {
            uf.union(v | c, w | c);
            if c == 0 {
                break;
            }
            c = (c - 1) & rest;
        }
    }
    let tops = class_tops(1 << size, |s| uf.find(s), |a, b| a | b, 0);
    let mut distinct: Vec<u64> = tops.iter().map(|&t| t as u64).collect();
    distinct.sort_by_key(|&m| (m.count_ones(), m));
    distinct.dedup();
    // [A] ≤ [B] iff top(A ∪ B) = top(B)
    let leq = distinct
        .iter()
        .map(|&a| {
            distinct
                .iter()
                .map(|&b| tops[(a | b) as usize] as u64 == b)
                .collect()
        })
        .collect();
    let names = (0..distinct.len()).map(|i| format!("c{i}")).collect();
    let lattice = check_suplattice(names, leq).ok()?;
    Some(TensorOracle {
        tops: distinct,
        lattice,
    })
}

/// Axiom checks written directly from raw tables, sharing no code with the
/// verifiers: every join is found by scanning all upper bounds of every
/// subset. Exponential; meant for carriers of at most a dozen elements.
pub mod naive {
    /// Joins of all subsets, indexed by bitmask, or `None` if `leq` is not a
    /// complete partial order.
    pub fn subset_joins(leq: &[Vec<bool>]) -> Option<Vec<usize>> {
        let n = leq.len();
        if n == 0 || n > 16 || leq.iter().any(|r| r.len() != n) {
            return None;
        }
        for x in 0..n {
            if !leq[x][x] {
                return None;
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return None;
                }
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return None;
                    }
                }
            }
        }
        (0usize..1 << n)
            .map(|s| {
                let upper: Vec<usize> = (0..n)
                    .filter(|&u| (0..n).all(|x| s >> x & 1 == 0 || leq[x][u]))
                    .collect();
                upper.iter().copied().find(|&u| upper.iter().all(|&v| leq[u][v]))
            })
            .collect()
    }

    fn bits(items: impl Iterator<Item = usize>) -> usize {
        items.fold(0, |acc, i| acc | 1 << i)
    }

    pub fn is_quantale(leq: &[Vec<bool>], mult: &[Vec<usize>], unit: usize) -> bool {
        let Some(joins) = subset_joins(leq) else {
            return false;
        };
        let n = leq.len();
        if unit >= n || mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return false;
        }
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| mult[mult[a][b]][c] == mult[a][mult[b][c]]))
        });
        let unital = (0..n).all(|a| mult[unit][a] == a && mult[a][unit] == a);
        let distributive = (0usize..1 << n).all(|s| {
            let members = || (0..n).filter(move |i| s >> i & 1 == 1);
            (0..n).all(|a| {
                mult[a][joins[s]] == joins[bits(members().map(|x| mult[a][x]))]
                    && mult[joins[s]][a] == joins[bits(members().map(|x| mult[x][a]))]
            })
        });
        assoc && unital && distributive
    }

    /// `action[a][x]` is `a·x` for left modules and `x·a` for right ones.
    pub fn is_module(
        q_leq: &[Vec<bool>],
        q_mult: &[Vec<usize>],
        q_unit: usize,
        leq: &[Vec<bool>],
        action: &[Vec<usize>],
        right: bool,
    ) -> bool {
        let (Some(q_joins), Some(joins)) = (subset_joins(q_leq), subset_joins(leq)) else {
            return false;
        };
        let (k, n) = (q_leq.len(), leq.len());
        if action.len() != k || action.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return false;
        }
        let assoc = (0..k).all(|a| {
            (0..k).all(|b| {
                (0..n).all(|x| {
                    if right {
                        action[q_mult[a][b]][x] == action[b][action[a][x]]
                    } else {
                        action[q_mult[a][b]][x] == action[a][action[b][x]]
                    }
                })
            })
        });
        let unital = (0..n).all(|x| action[q_unit][x] == x);
        let in_m = (0usize..1 << n).all(|s| {
            (0..k).all(|a| {
                action[a][joins[s]] == joins[bits((0..n).filter(|i| s >> i & 1 == 1).map(|x| action[a][x]))]
            })
        });
        let in_q = (0usize..1 << k).all(|s| {
            (0..n).all(|x| {
                action[q_joins[s]][x] == joins[bits((0..k).filter(|i| s >> i & 1 == 1).map(|a| action[a][x]))]
            })
        });
        assoc && unital && in_m && in_q
    }

    /// Extensive, monotone, idempotent, and `a·γ(x) ≤ γ(a·x)`.
    pub fn is_nucleus(leq: &[Vec<bool>], action: &[Vec<usize>], gamma: &[usize]) -> bool {
        let n = leq.len();
        if gamma.len() != n || gamma.iter().any(|&v| v >= n) {
            return false;
        }
        (0..n).all(|x| {
            leq[x][gamma[x]]
                && gamma[gamma[x]] == gamma[x]
                && (0..n).all(|y| !leq[x][y] || leq[gamma[x]][gamma[y]])
                && action.iter().all(|row| leq[row[gamma[x]]][gamma[row[x]]])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{saturated_elements, tensor_product};
    use crate::module::Side;

    fn two_module(l: FinSupLattice, side: Side) -> FinModule {
        FinModule::over_two(l).with_side(side).unwrap()
    }

    #[test]
    fn naive_checks_accept_small_structures() {
        let c3 = FinSupLattice::chain(3);
        assert!(naive::subset_joins(c3.leq_table()).is_some());
        let q = crate::quantale::FinQuantale::chain_frame(3);
        assert!(naive::is_quantale(q.lattice().leq_table(), q.mult_table(), q.unit()));
        let mut bad = q.mult_table().to_vec();
        bad[2][1] = 0;
        assert!(!naive::is_quantale(q.lattice().leq_table(), &bad, q.unit()));
    }

    #[test]
    fn module_oracle_agrees_with_saturation() {
        let m = two_module(FinSupLattice::powerset(2), Side::Left);
        for relation in [vec![], vec![(1, 2)], vec![(0, 3)], vec![(0, 1)]] {
            let s = saturated_elements(&m, &relation).unwrap();
            assert_eq!(module_congruence_tops(&m, &relation), s.sat);
        }
    }

    #[test]
    fn tensor_oracle_agrees_on_small_lattices() {
        let ls = [
            FinSupLattice::chain(2),
            FinSupLattice::chain(3),
            FinSupLattice::powerset(2),
        ];
        for a in &ls {
            for b in &ls {
                let m1 = two_module(a.clone(), Side::Right);
                let m2 = two_module(b.clone(), Side::Left);
                let t = tensor_product(&m1, &m2).unwrap();
                let o = tensor_by_congruence(&m1, &m2).unwrap();
                assert_eq!(o.tops, t.masks);
            }
        }
    }
}
