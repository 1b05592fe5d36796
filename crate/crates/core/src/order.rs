//! Finite sup-lattices and join-preserving maps.
//!
//! A lattice is stored over dense indices `0..n` with a total order table and
//! a precomputed binary join table. Joins of arbitrary subsets are folds of
//! the binary join starting from the bottom element, which is exact for
//! finite carriers.

use serde::Serialize;
use thiserror::Error;

/// Carriers up to this size get every subset join checked against the order.
pub const FULL_SUBSET_CHECK_BOUND: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderLaw {
    Reflexive,
    Antisymmetric,
    Transitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum LatticeError {
    #[error("carrier is empty")]
    Empty,
    #[error("order table must be {n}x{n}")]
    Shape { n: usize },
    #[error("relation is not a partial order ({law:?} fails at {witness:?})")]
    NotAPartialOrder { law: OrderLaw, witness: Vec<usize> },
    #[error("subset {witness:?} has no least upper bound")]
    MissingJoin { witness: Vec<usize> },
    #[error("map is not join-preserving (witness subset {witness:?})")]
    NotResiduated { witness: Vec<usize> },
    #[error("map table has length {found}, expected {expected}")]
    MapArity { expected: usize, found: usize },
    #[error("map sends {source_index} to {image}, outside a carrier of size {size}")]
    MapOutOfRange {
        source_index: usize,
        image: usize,
        size: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinSupLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

/// Validates a raw carrier and order relation. Runs the exhaustive subset
/// check when the carrier has at most [`FULL_SUBSET_CHECK_BOUND`] elements.
pub fn check_suplattice(
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
) -> Result<FinSupLattice, LatticeError> {
    check_suplattice_with_bound(names, leq, FULL_SUBSET_CHECK_BOUND)
}

pub fn check_suplattice_with_bound(
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    full_check_bound: usize,
) -> Result<FinSupLattice, LatticeError> {
    let n = names.len();
    if n == 0 {
        return Err(LatticeError::Empty);
    }
    if leq.len() != n || leq.iter().any(|row| row.len() != n) {
        return Err(LatticeError::Shape { n });
    }
    for a in 0..n {
        if !leq[a][a] {
            return Err(LatticeError::NotAPartialOrder {
                law: OrderLaw::Reflexive,
                witness: vec![a],
            });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if leq[a][b] && leq[b][a] {
                return Err(LatticeError::NotAPartialOrder {
                    law: OrderLaw::Antisymmetric,
                    witness: vec![a, b],
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !leq[a][b] {
                continue;
            }
            for c in 0..n {
                if leq[b][c] && !leq[a][c] {
                    return Err(LatticeError::NotAPartialOrder {
                        law: OrderLaw::Transitive,
                        witness: vec![a, b, c],
                    });
                }
            }
        }
    }

    let bottom = least_upper_bound(&leq, &[]).ok_or(LatticeError::MissingJoin {
        witness: Vec::new(),
    })?;
    let mut join = vec![vec![0; n]; n];
    for a in 0..n {
        for b in a..n {
            let j = least_upper_bound(&leq, &[a, b]).ok_or(LatticeError::MissingJoin {
                witness: vec![a, b],
            })?;
            join[a][b] = j;
            join[b][a] = j;
        }
    }
    let top = (0..n).fold(bottom, |acc, x| join[acc][x]);
    let lattice = FinSupLattice {
        names,
        leq,
        join,
        bottom,
        top,
    };
    if n <= full_check_bound {
        lattice.verify_subset_joins()?;
    }
    Ok(lattice)
}

fn least_upper_bound(leq: &[Vec<bool>], subset: &[usize]) -> Option<usize> {
    let n = leq.len();
    let uppers: Vec<usize> = (0..n)
        .filter(|&u| subset.iter().all(|&s| leq[s][u]))
        .collect();
    uppers
        .iter()
        .copied()
        .find(|&u| uppers.iter().all(|&v| leq[u][v]))
}

impl FinSupLattice {
    /// Builds a lattice from an order table, naming elements by index.
    pub fn from_order(leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let names = (0..leq.len()).map(|i| i.to_string()).collect();
        check_suplattice(names, leq)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        let names = (0..n).map(|i| i.to_string()).collect();
        check_suplattice(names, leq).expect("chains are lattices")
    }

    /// The powerset of an `n`-element set, elements indexed by bitmask.
    pub fn powerset(n: usize) -> Self {
        let size = 1usize << n;
        let leq = (0..size)
            .map(|a| (0..size).map(|b| a & !b == 0).collect())
            .collect();
        let names = (0..size)
            .map(|mask| {
                let items: Vec<String> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        check_suplattice_with_bound(names, leq, FULL_SUBSET_CHECK_BOUND.min(4))
            .expect("powersets are lattices")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join[acc][x])
    }

    /// Greatest lower bound, computed as the join of all common lower bounds.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.join_all((0..self.len()).filter(|&c| self.leq[c][a] && self.leq[c][b]))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Non-bottom elements that are not the join of two strictly smaller ones.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| x != self.bottom && !self.is_join_of_smaller(x))
            .collect()
    }

    fn is_join_of_smaller(&self, x: usize) -> bool {
        let below: Vec<usize> = self
            .elements()
            .filter(|&y| y != x && self.leq[y][x])
            .collect();
        below
            .iter()
            .any(|&a| below.iter().any(|&b| self.join[a][b] == x))
    }

    /// Number of elements strictly below `x`; a linear extension sorts by it.
    pub fn rank(&self, x: usize) -> usize {
        self.elements().filter(|&y| y != x && self.leq[y][x]).count()
    }

    /// Indices sorted so every element comes after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&x| (self.rank(x), x));
        order
    }

    /// Checks that the folded join of every subset is its least upper bound.
    pub fn verify_subset_joins(&self) -> Result<(), LatticeError> {
        let n = self.len();
        for mask in 0u64..(1u64 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let folded = self.join_all(subset.iter().copied());
            if least_upper_bound(&self.leq, &subset) != Some(folded) {
                return Err(LatticeError::MissingJoin { witness: subset });
            }
        }
        Ok(())
    }

    pub(crate) fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }
}

/// A total map between carriers, given as an index table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SupMap {
    pub table: Vec<usize>,
}

impl SupMap {
    pub fn new(table: Vec<usize>) -> Self {
        SupMap { table }
    }

    pub fn identity(n: usize) -> Self {
        SupMap {
            table: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`
    pub fn after(&self, first: &SupMap) -> SupMap {
        SupMap {
            table: first.table.iter().map(|&x| self.table[x]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.table.iter().all(|x| seen.insert(*x))
    }

    pub fn is_surjective(&self, target_size: usize) -> bool {
        let mut hit = vec![false; target_size];
        for &y in &self.table {
            hit[y] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn check_total(
        &self,
        source: &FinSupLattice,
        target: &FinSupLattice,
    ) -> Result<(), LatticeError> {
        if self.table.len() != source.len() {
            return Err(LatticeError::MapArity {
                expected: source.len(),
                found: self.table.len(),
            });
        }
        for (x, &y) in self.table.iter().enumerate() {
            if y >= target.len() {
                return Err(LatticeError::MapOutOfRange {
                    source_index: x,
                    image: y,
                    size: target.len(),
                });
            }
        }
        Ok(())
    }

    /// A subset whose join is not preserved, if any. Preservation of the
    /// empty join and of binary joins is equivalent to preservation of all
    /// joins on a finite lattice, so only those subsets are tried.
    pub fn join_witness(&self, source: &FinSupLattice, target: &FinSupLattice) -> Option<Vec<usize>> {
        if self.table[source.bottom()] != target.bottom() {
            return Some(Vec::new());
        }
        for a in source.elements() {
            for b in a + 1..source.len() {
                let lhs = self.table[source.join(a, b)];
                let rhs = target.join(self.table[a], self.table[b]);
                if lhs != rhs {
                    return Some(vec![a, b]);
                }
            }
        }
        None
    }

    pub fn is_monotone(&self, source: &FinSupLattice, target: &FinSupLattice) -> bool {
        source.elements().all(|a| {
            source
                .elements()
                .all(|b| !source.leq(a, b) || target.leq(self.table[a], self.table[b]))
        })
    }
}

pub fn is_join_preserving(f: &SupMap, source: &FinSupLattice, target: &FinSupLattice) -> bool {
    f.join_witness(source, target).is_none()
}

/// Right adjoint `f*(y) = ⋁{x : f(x) ≤ y}` of a join-preserving map.
pub fn residual(
    f: &SupMap,
    source: &FinSupLattice,
    target: &FinSupLattice,
) -> Result<SupMap, LatticeError> {
    f.check_total(source, target)?;
    if let Some(witness) = f.join_witness(source, target) {
        return Err(LatticeError::NotResiduated { witness });
    }
    let table: Vec<usize> = target
        .elements()
        .map(|y| source.join_all(source.elements().filter(|&x| target.leq(f.table[x], y))))
        .collect();
    let star = SupMap { table };
    for x in source.elements() {
        for y in target.elements() {
            debug_assert_eq!(
                target.leq(f.table[x], y),
                source.leq(x, star.table[y]),
                "Galois condition"
            );
        }
    }
    Ok(star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinSupLattice {
        // ⊥=0, a=1, b=2, ⊤=3
        let rel = [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)];
        let mut leq = vec![vec![false; 4]; 4];
        for i in 0..4 {
            leq[i][i] = true;
        }
        for (a, b) in rel {
            leq[a][b] = true;
        }
        check_suplattice(
            vec!["bot".into(), "a".into(), "b".into(), "top".into()],
            leq,
        )
        .unwrap()
    }

    #[test]
    fn two_chain_joins() {
        let c = FinSupLattice::chain(2);
        assert_eq!(c.join(0, 1), 1);
        assert_eq!(c.bottom(), 0);
        assert_eq!(c.top(), 1);
    }

    #[test]
    fn diamond_is_valid() {
        let d = diamond();
        assert_eq!(d.join(1, 2), 3);
        assert_eq!(d.meet(1, 2), 0);
        assert_eq!(d.join_irreducibles(), vec![1, 2]);
    }

    #[test]
    fn vee_without_top_is_rejected() {
        let leq = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        let err = FinSupLattice::from_order(leq).unwrap_err();
        assert_eq!(err, LatticeError::MissingJoin { witness: vec![1, 2] });
    }

    #[test]
    fn order_law_failures_carry_witnesses() {
        let not_reflexive = vec![vec![false, true], vec![false, true]];
        assert!(matches!(
            FinSupLattice::from_order(not_reflexive),
            Err(LatticeError::NotAPartialOrder { law: OrderLaw::Reflexive, .. })
        ));
        let cyclic = vec![vec![true, true], vec![true, true]];
        assert!(matches!(
            FinSupLattice::from_order(cyclic),
            Err(LatticeError::NotAPartialOrder { law: OrderLaw::Antisymmetric, .. })
        ));
        let intransitive = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(matches!(
            FinSupLattice::from_order(intransitive),
            Err(LatticeError::NotAPartialOrder { law: OrderLaw::Transitive, .. })
        ));
    }

    #[test]
    fn join_preservation_examples() {
        let c = FinSupLattice::chain(2);
        let d = diamond();
        assert!(is_join_preserving(&SupMap::identity(2), &c, &c));
        let to_top = SupMap::new(vec![3, 3, 3, 3]);
        assert_eq!(to_top.join_witness(&d, &d), Some(vec![]));
        let into_a = SupMap::new(vec![0, 1]);
        assert!(is_join_preserving(&into_a, &c, &d));
    }

    /// Brute force: f*(y) is the unique x with f(z) ≤ y ⟺ z ≤ x for all z.
    fn adjoint_by_search(f: &SupMap, s: &FinSupLattice, t: &FinSupLattice) -> Vec<usize> {
        t.elements()
            .map(|y| {
                let candidates: Vec<usize> = s
                    .elements()
                    .filter(|&x| s.elements().all(|z| t.leq(f.apply(z), y) == s.leq(z, x)))
                    .collect();
                assert_eq!(candidates.len(), 1);
                candidates[0]
            })
            .collect()
    }

    #[test]
    fn residual_examples() {
        let c = FinSupLattice::chain(2);
        let d = diamond();
        assert_eq!(residual(&SupMap::identity(4), &d, &d).unwrap(), SupMap::identity(4));

        let into_a = SupMap::new(vec![0, 1]);
        let star = residual(&into_a, &c, &d).unwrap();
        assert_eq!(star.table, vec![0, 1, 0, 1]);
        assert_eq!(star.table, adjoint_by_search(&into_a, &c, &d));

        let collapse = SupMap::new(vec![0, 1, 1, 1]);
        let star = residual(&collapse, &d, &c).unwrap();
        assert_eq!(star.table, vec![0, 3]);
        assert_eq!(star.table, adjoint_by_search(&collapse, &d, &c));
    }

    #[test]
    fn residual_rejects_non_join_maps() {
        let d = diamond();
        let err = residual(&SupMap::new(vec![3, 3, 3, 3]), &d, &d).unwrap_err();
        assert_eq!(err, LatticeError::NotResiduated { witness: vec![] });
    }

    #[test]
    fn triangle_identities_hold() {
        let d = diamond();
        let c = FinSupLattice::chain(3);
        // every join-preserving map diamond -> 3-chain
        for t in 0..81usize {
            let table = vec![t % 3, t / 3 % 3, t / 9 % 3, t / 27 % 3];
            let f = SupMap::new(table);
            if !is_join_preserving(&f, &d, &c) {
                continue;
            }
            let star = residual(&f, &d, &c).unwrap();
            assert_eq!(f.after(&star).after(&f), f);
            assert_eq!(star.after(&f).after(&star), star);
        }
    }
}
