//! Finite unital quantales, their homomorphisms, and powerset quantales of
//! finite monoids.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::order::{FinSupLattice, LatticeError, SupMap};
use crate::search::enumerate_join_maps;

/// Largest monoid accepted by [`powerset_quantale`] (carrier `2^8`).
pub const POWERSET_MONOID_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum QuantaleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("table has wrong shape")]
    Shape,
    #[error("table entry out of range at {witness:?}")]
    OutOfRange { witness: Vec<usize> },
    #[error("multiplication is not associative at {witness:?}")]
    NotAssociative { witness: [usize; 3] },
    #[error("{unit} is not a two-sided unit (fails at {witness})")]
    NoUnit { unit: usize, witness: usize },
    #[error("multiplication does not distribute over joins at {witness:?}")]
    NotDistributive { witness: Vec<usize> },
    #[error("homomorphism does not preserve joins (witness subset {witness:?})")]
    JoinNotPreserved { witness: Vec<usize> },
    #[error("unit is not preserved: 1 maps to {image}")]
    UnitNotPreserved { image: usize },
    #[error("multiplication is not preserved at {witness:?}")]
    MultNotPreserved { witness: [usize; 2] },
    #[error("monoid of size {size} exceeds the powerset bound {bound}")]
    SizeBound { size: usize, bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinQuantale {
    lattice: FinSupLattice,
    mult: Vec<Vec<usize>>,
    unit: usize,
}

/// Validates associativity, the unit laws and two-sided distributivity over
/// the empty join and binary joins.
pub fn check_quantale(
    lattice: FinSupLattice,
    mult: Vec<Vec<usize>>,
    unit: usize,
) -> Result<FinQuantale, QuantaleError> {
    let n = lattice.len();
    if mult.len() != n || mult.iter().any(|row| row.len() != n) {
        return Err(QuantaleError::Shape);
    }
    if unit >= n {
        return Err(QuantaleError::OutOfRange { witness: vec![unit] });
    }
    for a in 0..n {
        for b in 0..n {
            if mult[a][b] >= n {
                return Err(QuantaleError::OutOfRange { witness: vec![a, b] });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(QuantaleError::NotAssociative { witness: [a, b, c] });
                }
            }
        }
    }
    for a in 0..n {
        if mult[unit][a] != a || mult[a][unit] != a {
            return Err(QuantaleError::NoUnit { unit, witness: a });
        }
    }
    let bot = lattice.bottom();
    for a in 0..n {
        if mult[a][bot] != bot || mult[bot][a] != bot {
            return Err(QuantaleError::NotDistributive { witness: vec![a] });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in b + 1..n {
                let bc = lattice.join(b, c);
                if mult[a][bc] != lattice.join(mult[a][b], mult[a][c])
                    || mult[bc][a] != lattice.join(mult[b][a], mult[c][a])
                {
                    return Err(QuantaleError::NotDistributive {
                        witness: vec![a, b, c],
                    });
                }
            }
        }
    }
    Ok(FinQuantale {
        lattice,
        mult,
        unit,
    })
}

impl FinQuantale {
    /// The two-element Boolean quantale `{⊥, 1}` with meet as product.
    pub fn two() -> Self {
        let lattice = FinSupLattice::chain(2).with_names(vec!["bot".into(), "1".into()]);
        check_quantale(lattice, vec![vec![0, 0], vec![0, 1]], 1).expect("2 is a quantale")
    }

    /// A chain with meet as product and the top as unit.
    pub fn chain_frame(n: usize) -> Self {
        let lattice = FinSupLattice::chain(n);
        let mult = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
        check_quantale(lattice, mult, n - 1).expect("chains are frames")
    }

    pub fn lattice(&self) -> &FinSupLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.lattice.elements()
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    /// Left residual `a\b = ⋁{c : a·c ≤ b}`.
    pub fn left_residual(&self, a: usize, b: usize) -> usize {
        self.lattice.join_all(
            self.elements()
                .filter(|&c| self.lattice.leq(self.mult[a][c], b)),
        )
    }

    /// Right residual `b/a = ⋁{c : c·a ≤ b}`.
    pub fn right_residual(&self, b: usize, a: usize) -> usize {
        self.lattice.join_all(
            self.elements()
                .filter(|&c| self.lattice.leq(self.mult[c][a], b)),
        )
    }

    /// The same carrier with the product reversed.
    pub fn opposite(&self) -> FinQuantale {
        let n = self.len();
        let mult = (0..n)
            .map(|a| (0..n).map(|b| self.mult[b][a]).collect())
            .collect();
        FinQuantale {
            lattice: self.lattice.clone(),
            mult,
            unit: self.unit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct QuantaleHom {
    pub map: SupMap,
}

impl QuantaleHom {
    pub fn identity(q: &FinQuantale) -> Self {
        QuantaleHom {
            map: SupMap::identity(q.len()),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map.apply(a)
    }

    /// `self ∘ first`
    pub fn after(&self, first: &QuantaleHom) -> QuantaleHom {
        QuantaleHom {
            map: self.map.after(&first.map),
        }
    }
}

pub fn check_quantale_hom(
    table: Vec<usize>,
    source: &FinQuantale,
    target: &FinQuantale,
) -> Result<QuantaleHom, QuantaleError> {
    let map = SupMap::new(table);
    map.check_total(source.lattice(), target.lattice())?;
    if let Some(witness) = map.join_witness(source.lattice(), target.lattice()) {
        return Err(QuantaleError::JoinNotPreserved { witness });
    }
    let image = map.apply(source.unit());
    if image != target.unit() {
        return Err(QuantaleError::UnitNotPreserved { image });
    }
    for a in source.elements() {
        for b in source.elements() {
            if map.apply(source.mult(a, b)) != target.mult(map.apply(a), map.apply(b)) {
                return Err(QuantaleError::MultNotPreserved { witness: [a, b] });
            }
        }
    }
    Ok(QuantaleHom { map })
}

/// All unital quantale homomorphisms `source → target`, sorted by table.
pub fn quantale_homs(source: &FinQuantale, target: &FinQuantale) -> Vec<QuantaleHom> {
    let n = source.len();
    let mut products: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            products[source.mult(a, b)].push((a, b));
        }
    }
    enumerate_join_maps(
        source.lattice(),
        target.lattice(),
        &[(source.unit(), target.unit())],
        |f, x| {
            let fx = f[x].unwrap();
            // products with x as a factor whose result is already assigned
            for y in 0..n {
                let Some(fy) = f[y] else { continue };
                for (l, r, fl, fr) in [(x, y, fx, fy), (y, x, fy, fx)] {
                    if let Some(fp) = f[source.mult(l, r)] {
                        if fp != target.mult(fl, fr) {
                            return false;
                        }
                    }
                }
            }
            // x as a product of assigned factors
            products[x].iter().all(|&(a, b)| match (f[a], f[b]) {
                (Some(fa), Some(fb)) => target.mult(fa, fb) == fx,
                _ => true,
            })
        },
    )
    .into_iter()
    .map(|map| QuantaleHom { map })
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinMonoid {
    names: Vec<String>,
    op: Vec<Vec<usize>>,
    unit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum MonoidError {
    #[error("monoid table has wrong shape or entries")]
    Shape,
    #[error("operation is not associative at {witness:?}")]
    NotAssociative { witness: [usize; 3] },
    #[error("{unit} is not a two-sided unit (fails at {witness})")]
    NoUnit { unit: usize, witness: usize },
}

pub fn check_monoid(
    names: Vec<String>,
    op: Vec<Vec<usize>>,
    unit: usize,
) -> Result<FinMonoid, MonoidError> {
    let n = names.len();
    if n == 0
        || unit >= n
        || op.len() != n
        || op.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n))
    {
        return Err(MonoidError::Shape);
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if op[op[a][b]][c] != op[a][op[b][c]] {
                    return Err(MonoidError::NotAssociative { witness: [a, b, c] });
                }
            }
        }
    }
    for a in 0..n {
        if op[unit][a] != a || op[a][unit] != a {
            return Err(MonoidError::NoUnit { unit, witness: a });
        }
    }
    Ok(FinMonoid { names, op, unit })
}

impl FinMonoid {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a][b]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| format!("g{i}")).collect();
        let op = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        check_monoid(names, op, 0).expect("cyclic groups are monoids")
    }
}

/// The quantale of subsets of a monoid with complex multiplication
/// `X·Y = {x·y : x ∈ X, y ∈ Y}` and unit `{1}`. Subsets are indexed by
/// bitmask over the monoid's element indices.
pub fn powerset_quantale(m: &FinMonoid) -> Result<FinQuantale, QuantaleError> {
    powerset_quantale_with_bound(m, POWERSET_MONOID_BOUND)
}

pub fn powerset_quantale_with_bound(
    m: &FinMonoid,
    bound: usize,
) -> Result<FinQuantale, QuantaleError> {
    let k = m.len();
    if k > bound {
        return Err(QuantaleError::SizeBound { size: k, bound });
    }
    let size = 1usize << k;
    let names = (0..size)
        .map(|mask| {
            let items: Vec<&str> = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| m.names[i].as_str())
                .collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    let lattice = FinSupLattice::powerset(k).with_names(names);
    let mult = (0..size)
        .map(|x| {
            (0..size)
                .map(|y| {
                    let mut out = 0usize;
                    for i in (0..k).filter(|i| x >> i & 1 == 1) {
                        for j in (0..k).filter(|j| y >> j & 1 == 1) {
                            out |= 1 << m.op(i, j);
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    check_quantale(lattice, mult, 1 << m.unit())
}

/// Shared handle used by modules to refer to their scalars.
pub type Scalars = Arc<FinQuantale>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_and_three_chain_frame() {
        let two = FinQuantale::two();
        assert_eq!(two.unit(), 1);
        let three = FinQuantale::chain_frame(3);
        assert_eq!(three.unit(), 2);
        assert!(three.is_commutative());
    }

    #[test]
    fn join_as_product_fails_distributivity() {
        // ⊥ is a unit for ∨ and ∨ is associative, but 1·⊥ = 1 ≠ ⊥
        let err = check_quantale(FinSupLattice::chain(2), vec![vec![0, 1], vec![1, 1]], 0)
            .unwrap_err();
        assert_eq!(err, QuantaleError::NotDistributive { witness: vec![1] });
    }

    #[test]
    fn powerset_examples() {
        let trivial = check_monoid(vec!["e".into()], vec![vec![0]], 0).unwrap();
        let p1 = powerset_quantale(&trivial).unwrap();
        assert_eq!(p1.len(), 2);
        assert_eq!(p1.mult_table(), FinQuantale::two().mult_table());

        let z2 = FinMonoid::cyclic(2);
        let p = powerset_quantale(&z2).unwrap();
        assert_eq!(p.len(), 4);
        // {g} = mask 0b10, {1} = mask 0b01
        assert_eq!(p.mult(0b10, 0b10), 0b01);
        assert_eq!(p.unit(), 0b01);

        let zm = check_monoid(
            vec!["1".into(), "z".into()],
            vec![vec![0, 1], vec![1, 1]],
            0,
        )
        .unwrap();
        let pz = powerset_quantale(&zm).unwrap();
        assert_eq!(pz.mult(0b10, 0b10), 0b10);
        assert_eq!(pz.mult(0b11, 0b10), 0b10);
    }

    #[test]
    fn powerset_size_bound() {
        let big = FinMonoid::cyclic(9);
        assert_eq!(
            powerset_quantale(&big).unwrap_err(),
            QuantaleError::SizeBound { size: 9, bound: 8 }
        );
    }

    #[test]
    fn homomorphism_examples() {
        let two = FinQuantale::two();
        assert!(check_quantale_hom(vec![0, 1], &two, &two).is_ok());

        let three = FinQuantale::chain_frame(3);
        // 2 -> 3-chain frame: ⊥ ↦ ⊥, 1 ↦ ⊤ (the unit)
        assert!(check_quantale_hom(vec![0, 2], &two, &three).is_ok());
        assert_eq!(quantale_homs(&two, &three).len(), 1);

        // 3-chain frame -> 2
        assert!(check_quantale_hom(vec![0, 1, 1], &three, &two).is_ok());
        assert!(check_quantale_hom(vec![0, 0, 1], &three, &two).is_ok());
        assert_eq!(
            check_quantale_hom(vec![0, 0, 0], &three, &two).unwrap_err(),
            QuantaleError::UnitNotPreserved { image: 0 }
        );
        assert_eq!(quantale_homs(&three, &two).len(), 2);
    }

    #[test]
    fn mult_violation_is_witnessed() {
        // Łukasiewicz 3-chain: a⊗b = max(0, a+b-2) on {0,1,2}
        let luk = check_quantale(
            FinSupLattice::chain(3),
            (0..3)
                .map(|a| (0..3).map(|b| (a + b as usize).saturating_sub(2)).collect())
                .collect(),
            2,
        )
        .unwrap();
        let frame = FinQuantale::chain_frame(3);
        // identity on carriers is join- and unit-preserving, but ½⊗½ = 0 ≠ ½∧½
        assert_eq!(
            check_quantale_hom(vec![0, 1, 2], &luk, &frame).unwrap_err(),
            QuantaleError::MultNotPreserved { witness: [1, 1] }
        );
    }

    #[test]
    fn residuals_satisfy_adjunction() {
        let p = powerset_quantale(&FinMonoid::cyclic(3)).unwrap();
        let l = p.lattice();
        for a in p.elements() {
            for b in p.elements() {
                for c in p.elements() {
                    assert_eq!(l.leq(p.mult(a, c), b), l.leq(c, p.left_residual(a, b)));
                    assert_eq!(l.leq(p.mult(c, a), b), l.leq(c, p.right_residual(b, a)));
                }
            }
        }
    }

    #[test]
    fn bottom_annihilates_and_homs_compose() {
        let qs = [
            FinQuantale::two(),
            FinQuantale::chain_frame(3),
            powerset_quantale(&FinMonoid::cyclic(2)).unwrap(),
        ];
        for q in &qs {
            for a in q.elements() {
                assert_eq!(q.mult(a, q.bottom()), q.bottom());
                assert_eq!(q.mult(q.bottom(), a), q.bottom());
            }
        }
        for a in &qs {
            for b in &qs {
                for c in &qs {
                    for f in quantale_homs(a, b) {
                        for g in quantale_homs(b, c) {
                            check_quantale_hom(g.after(&f).map.table, a, c).unwrap();
                        }
                    }
                }
            }
        }
    }
}
