//! Tensor products of a right and a left module over a common quantale,
//! computed as saturated subsets of `M₁ × M₂`.
//!
//! A subset `S` of pairs is saturated when every `y`-column of `S` is a
//! principal ideal of `M₁`, every `x`-row is a principal ideal of `M₂`, and
//! `(x·a, y) ∈ S ⟺ (x, a·y) ∈ S`. Closure under these Horn conditions gives
//! `sat`, and the tensor is the set of closed subsets ordered by inclusion.
//! Subsets are `u64` bitmasks, pair `(x, y)` being bit `x·|M₂| + y`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::ConstructionError;
use crate::module::{check_module, check_module_hom, check_module_sided, restrict_scalars};
use crate::module::{same_quantale, FinModule, ModuleHom, Side};
use crate::order::{check_suplattice, FinSupLattice, SupMap};
use crate::quantale::{FinQuantale, QuantaleHom, Scalars};

/// Default bound on `|M₁|·|M₂|`.
pub const TENSOR_PAIR_BOUND: usize = 20;
/// Hard limit imposed by the bitmask representation.
pub const TENSOR_PAIR_LIMIT: usize = 64;
/// Largest number of tensor elements materialized.
pub const TENSOR_ELEMENT_BOUND: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    n1: usize,
    n2: usize,
    base: u64,
    down: Vec<u64>,
    balance: Vec<u64>,
    left: FinSupLattice,
    right: FinSupLattice,
    /// Scalar-free generating pairs `(V, W)`; `S` is saturated iff
    /// `V ⊆ S ⟺ W ⊆ S` for each.
    generators: Vec<(u64, u64)>,
}

impl Closure {
    fn new(m1: &FinModule, m2: &FinModule) -> Self {
        let (n1, n2) = (m1.len(), m2.len());
        let bit = |x: usize, y: usize| 1u64 << (x * n2 + y);
        let mut base = 0;
        for y in 0..n2 {
            base |= bit(m1.bottom(), y);
        }
        for x in 0..n1 {
            base |= bit(x, m2.bottom());
        }
        let mut down = vec![0u64; n1 * n2];
        for x in 0..n1 {
            for y in 0..n2 {
                for x2 in (0..n1).filter(|&x2| m1.leq(x2, x)) {
                    for y2 in (0..n2).filter(|&y2| m2.leq(y2, y)) {
                        down[x * n2 + y] |= bit(x2, y2);
                    }
                }
            }
        }
        let mut balance = vec![0u64; n1 * n2];
        let mut generators = Vec::new();
        for a in m1.scalars().elements() {
            for x in 0..n1 {
                for y in 0..n2 {
                    let p = m1.act(a, x) * n2 + y;
                    let q = x * n2 + m2.act(a, y);
                    balance[p] |= 1 << q;
                    balance[q] |= 1 << p;
                    generators.push((1 << p, 1 << q));
                }
            }
        }
        for y in 0..n2 {
            generators.push((bit(m1.bottom(), y), 0));
            for x in 0..n1 {
                for x2 in x..n1 {
                    generators.push((bit(m1.join(x, x2), y), bit(x, y) | bit(x2, y)));
                }
            }
        }
        for x in 0..n1 {
            generators.push((bit(x, m2.bottom()), 0));
            for y in 0..n2 {
                for y2 in y..n2 {
                    generators.push((bit(x, m2.join(y, y2)), bit(x, y) | bit(x, y2)));
                }
            }
        }
        generators.sort();
        generators.dedup();
        Closure {
            n1,
            n2,
            base,
            down,
            balance,
            left: m1.lattice().clone(),
            right: m2.lattice().clone(),
            generators,
        }
    }

    fn has(&self, s: u64, x: usize, y: usize) -> bool {
        s >> (x * self.n2 + y) & 1 == 1
    }

    pub fn saturate(&self, mut s: u64) -> u64 {
        s |= self.base;
        loop {
            let before = s;
            let mut rest = s;
            while rest != 0 {
                let p = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                s |= self.down[p] | self.balance[p];
            }
            for y in 0..self.n2 {
                let j = self
                    .left
                    .join_all((0..self.n1).filter(|&x| self.has(s, x, y)));
                s |= self.down[j * self.n2 + y];
            }
            for x in 0..self.n1 {
                let j = self
                    .right
                    .join_all((0..self.n2).filter(|&y| self.has(s, x, y)));
                s |= self.down[x * self.n2 + j];
            }
            if s == before {
                return s;
            }
        }
    }

    /// First generating pair on which `s` fails the saturation biconditional.
    pub fn violated_generator(&self, s: u64) -> Option<(u64, u64)> {
        self.generators
            .iter()
            .copied()
            .find(|&(v, w)| (v & !s == 0) != (w & !s == 0))
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn pair_count(&self) -> usize {
        self.n1 * self.n2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorResult {
    pub module: FinModule,
    /// Element `i` as a saturated set of pairs.
    pub masks: Vec<u64>,
    /// `pure[x][y]` is the element `x ⊗ y`.
    pub pure: Vec<Vec<usize>>,
    #[serde(skip)]
    pub closure: Closure,
    #[serde(skip)]
    index: HashMap<u64, usize>,
}

impl TensorResult {
    pub fn pure(&self, x: usize, y: usize) -> usize {
        self.pure[x][y]
    }

    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// The pairs `(x, y)` contained in element `i`.
    pub fn pairs(&self, i: usize) -> Vec<(usize, usize)> {
        let n2 = self.closure.n2;
        let mask = self.masks[i];
        (0..self.closure.pair_count())
            .filter(|p| mask >> p & 1 == 1)
            .map(|p| (p / n2, p % n2))
            .collect()
    }

    pub fn left_size(&self) -> usize {
        self.closure.n1
    }

    pub fn right_size(&self) -> usize {
        self.closure.n2
    }
}

/// A left action of another quantale on the first factor, commuting with
/// its right action, which then acts on the tensor product.
#[derive(Debug, Clone, Copy)]
pub struct OuterAction<'a> {
    pub scalars: &'a Scalars,
    pub action: &'a [Vec<usize>],
}

/// `M₁ ⊗_Q M₂` as a sup-lattice (a module over the two-element quantale).
pub fn tensor_product(m1: &FinModule, m2: &FinModule) -> Result<TensorResult, ConstructionError> {
    tensor_product_with(m1, m2, None, TENSOR_PAIR_BOUND)
}

pub fn tensor_product_with(
    m1: &FinModule,
    m2: &FinModule,
    outer: Option<OuterAction<'_>>,
    max_pairs: usize,
) -> Result<TensorResult, ConstructionError> {
    if m1.side() != Side::Right || m2.side() != Side::Left {
        return Err(ConstructionError::IllFormedInputs {
            reason: "tensor needs a right module on the left and a left module on the right"
                .into(),
        });
    }
    if !m1.same_scalars(m2) {
        return Err(ConstructionError::IllFormedInputs {
            reason: "factors are over different quantales".into(),
        });
    }
    let size = m1.len() * m2.len();
    let bound = max_pairs.min(TENSOR_PAIR_LIMIT);
    if size > bound {
        return Err(ConstructionError::SizeBound { size, bound });
    }
    let closure = Closure::new(m1, m2);
    let n2 = m2.len();

    let mut generators: BTreeSet<u64> = (0..size).map(|p| closure.saturate(1 << p)).collect();
    generators.insert(closure.saturate(0));
    let generators: Vec<u64> = generators.into_iter().collect();
    let mut found: BTreeSet<u64> = generators.iter().copied().collect();
    let mut queue: Vec<u64> = generators.clone();
    while let Some(e) = queue.pop() {
        for &g in &generators {
            let j = closure.saturate(e | g);
            if found.insert(j) {
                if found.len() > TENSOR_ELEMENT_BOUND {
                    return Err(ConstructionError::SizeBound {
                        size: found.len(),
                        bound: TENSOR_ELEMENT_BOUND,
                    });
                }
                queue.push(j);
            }
        }
    }
    let mut masks: Vec<u64> = found.into_iter().collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();

    let names = masks
        .iter()
        .map(|&mask| element_name(m1, m2, mask))
        .collect();
    let leq = masks
        .iter()
        .map(|&a| masks.iter().map(|&b| a & !b == 0).collect())
        .collect();
    let lattice = check_suplattice(names, leq)?;

    let pure = (0..m1.len())
        .map(|x| {
            (0..n2)
                .map(|y| index[&closure.saturate(1 << (x * n2 + y))])
                .collect()
        })
        .collect();

    let module = match outer {
        None => FinModule::over_two(lattice),
        Some(OuterAction { scalars, action }) => {
            let table = scalars
                .elements()
                .map(|p| {
                    masks
                        .iter()
                        .map(|&mask| {
                            let mut image = 0u64;
                            for q in (0..size).filter(|q| mask >> q & 1 == 1) {
                                image |= 1 << (action[p][q / n2] * n2 + q % n2);
                            }
                            index[&closure.saturate(image)]
                        })
                        .collect()
                })
                .collect();
            check_module(scalars, lattice, table).map_err(|e| {
                ConstructionError::IllFormedInputs {
                    reason: format!("outer action does not descend to the tensor: {e}"),
                }
            })?
        }
    };
    Ok(TensorResult {
        module,
        masks,
        pure,
        closure,
        index,
    })
}

fn element_name(m1: &FinModule, m2: &FinModule, mask: u64) -> String {
    let n2 = m2.len();
    let pairs: Vec<(usize, usize)> = (0..m1.len() * n2)
        .filter(|p| mask >> p & 1 == 1)
        .map(|p| (p / n2, p % n2))
        .filter(|&(x, y)| x != m1.bottom() && y != m2.bottom())
        .collect();
    let maximal: Vec<String> = pairs
        .iter()
        .filter(|&&(x, y)| {
            !pairs
                .iter()
                .any(|&(x2, y2)| (x2, y2) != (x, y) && m1.leq(x, x2) && m2.leq(y, y2))
        })
        .map(|&(x, y)| format!("{}⊗{}", m1.lattice().name(x), m2.lattice().name(y)))
        .collect();
    if maximal.is_empty() {
        "0".into()
    } else {
        maximal.join("∨")
    }
}

/// `R` as a right `Q`-module through `h`: `r·a = r·h(a)`.
pub fn scalars_as_right_module(
    h: &QuantaleHom,
    q: &Scalars,
    r: &Scalars,
) -> Result<FinModule, ConstructionError> {
    let action = q
        .elements()
        .map(|a| r.elements().map(|x| r.mult(x, h.apply(a))).collect())
        .collect();
    Ok(check_module_sided(q, r.lattice().clone(), action, Side::Right)?)
}

/// `R ⊗_Q M` as a left `R`-module, for `h: Q → R`.
pub fn extend_scalars(
    h: &QuantaleHom,
    r: &Scalars,
    m: &FinModule,
) -> Result<TensorResult, ConstructionError> {
    extend_scalars_with(h, r, m, TENSOR_PAIR_BOUND)
}

pub fn extend_scalars_with(
    h: &QuantaleHom,
    r: &Scalars,
    m: &FinModule,
    max_pairs: usize,
) -> Result<TensorResult, ConstructionError> {
    let q = m.scalars();
    crate::quantale::check_quantale_hom(h.map.table.clone(), q, r)?;
    let right = scalars_as_right_module(h, q, r)?;
    let left_mult: Vec<Vec<usize>> = r
        .elements()
        .map(|p| r.elements().map(|x| r.mult(p, x)).collect())
        .collect();
    let m = if m.side() == Side::Left {
        m.clone()
    } else {
        m.with_side(Side::Left)
            .map_err(|_| ConstructionError::IllFormedInputs {
                reason: "module must be a left module".into(),
            })?
    };
    tensor_product_with(
        &right,
        &m,
        Some(OuterAction {
            scalars: r,
            action: &left_mult,
        }),
        max_pairs,
    )
}

/// The `R`-module morphism `R ⊗_Q M → N` with `r ⊗ x ↦ r·f(x)`, for
/// `f: M → N_h`.
pub fn induced_tensor_hom(
    h: &QuantaleHom,
    m: &FinModule,
    f: &ModuleHom,
    n: &FinModule,
    tensor: &TensorResult,
) -> Result<ModuleHom, ConstructionError> {
    let r = n.scalars();
    let nh = restrict_scalars(h, m.scalars(), n)?;
    check_module_hom(f.map.table.clone(), m, &nh).map_err(|e| ConstructionError::IllFormedInputs {
        reason: format!("f is not a morphism into the restricted module: {e}"),
    })?;
    if !same_quantale(tensor.module.scalars(), r) || tensor.right_size() != m.len() {
        return Err(ConstructionError::IllFormedInputs {
            reason: "tensor does not match R and M".into(),
        });
    }
    let table = (0..tensor.masks.len())
        .map(|i| {
            n.lattice().join_all(
                tensor
                    .pairs(i)
                    .into_iter()
                    .map(|(s, x)| n.act(s, f.apply(x))),
            )
        })
        .collect();
    check_module_hom(table, &tensor.module, n).map_err(|e| ConstructionError::IllFormedInputs {
        reason: format!("induced map is not a morphism: {e}"),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitEmbedding {
    /// `x ↦ 1 ⊗ x`, a morphism `M → (R ⊗_Q M)_h`.
    pub mu: ModuleHom,
    /// `x̄ = {(r, y) : r·f(y) ≤ f(x)}` for each `x`.
    pub witnesses: Vec<u64>,
    pub witnesses_saturated: bool,
    pub injective: bool,
}

/// `μ: x ↦ 1 ⊗ x` together with the saturated witnesses that separate the
/// pure tensors `1 ⊗ x`, given an embedding `f: M → N_h`.
pub fn tensor_unit_embedding(
    h: &QuantaleHom,
    m: &FinModule,
    f: &ModuleHom,
    n: &FinModule,
    tensor: &TensorResult,
) -> Result<UnitEmbedding, ConstructionError> {
    let r = n.scalars();
    let nh = restrict_scalars(h, m.scalars(), n)?;
    check_module_hom(f.map.table.clone(), m, &nh).map_err(|e| ConstructionError::IllFormedInputs {
        reason: format!("witness is not a morphism into the restricted module: {e}"),
    })?;
    for x in m.elements() {
        for y in x + 1..m.len() {
            if f.apply(x) == f.apply(y) {
                return Err(ConstructionError::WitnessNotInjective { x, y });
            }
        }
    }
    let n2 = tensor.right_size();
    let mu = ModuleHom {
        map: SupMap::new(m.elements().map(|x| tensor.pure(r.unit(), x)).collect()),
    };
    let target = restrict_scalars(h, m.scalars(), &tensor.module)?;
    check_module_hom(mu.map.table.clone(), m, &target)?;
    let witnesses: Vec<u64> = m
        .elements()
        .map(|x| {
            let mut mask = 0u64;
            for s in r.elements() {
                for y in m.elements() {
                    if n.leq(n.act(s, f.apply(y)), f.apply(x)) {
                        mask |= 1 << (s * n2 + y);
                    }
                }
            }
            mask
        })
        .collect();
    let witnesses_saturated = witnesses
        .iter()
        .all(|&w| tensor.closure.violated_generator(w).is_none());
    Ok(UnitEmbedding {
        injective: mu.is_injective(),
        mu,
        witnesses,
        witnesses_saturated,
    })
}

/// The two-element quantale shared by tensors computed as sup-lattices.
pub fn two() -> Scalars {
    Arc::new(FinQuantale::two())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::module_isomorphism;
    use crate::quantale::{check_quantale_hom, powerset_quantale, FinMonoid};
    use crate::search::lattice_isomorphism;
    use std::time::Duration;

    fn over_two(l: FinSupLattice, side: Side) -> FinModule {
        FinModule::over_two(l).with_side(side).unwrap()
    }

    #[test]
    fn two_tensor_two_is_two() {
        let a = over_two(FinSupLattice::chain(2), Side::Right);
        let b = over_two(FinSupLattice::chain(2), Side::Left);
        let t = tensor_product(&a, &b).unwrap();
        assert_eq!(t.masks.len(), 2);
        assert_eq!(t.pure(1, 1), 1);
        assert_eq!(t.pure(0, 1), 0);
    }

    #[test]
    fn diamond_tensor_two_chain_is_diamond() {
        let a = over_two(FinSupLattice::powerset(2), Side::Right);
        let b = over_two(FinSupLattice::chain(2), Side::Left);
        let t = tensor_product(&a, &b).unwrap();
        assert!(lattice_isomorphism(t.module.lattice(), &FinSupLattice::powerset(2)).is_isomorphic());
    }

    #[test]
    fn chains_over_two_multiply_as_distributive_lattices() {
        // C3 ⊗ C3 over 2: down-sets of the 2×2 grid
        let a = over_two(FinSupLattice::chain(3), Side::Right);
        let b = over_two(FinSupLattice::chain(3), Side::Left);
        let t = tensor_product(&a, &b).unwrap();
        assert_eq!(t.masks.len(), 6);
    }

    #[test]
    fn unit_isomorphism_for_regular_modules() {
        let qs = [
            FinQuantale::chain_frame(3),
            powerset_quantale(&FinMonoid::cyclic(2)).unwrap(),
        ];
        for q in qs {
            let q = Arc::new(q);
            let m = FinModule::regular(&q, Side::Left);
            let t = extend_scalars(&QuantaleHom::identity(&q), &q, &m).unwrap();
            assert!(module_isomorphism(&t.module, &m, Duration::from_secs(5)).is_isomorphic());
        }
    }

    #[test]
    fn induced_hom_on_identity_is_action() {
        let q = Arc::new(FinQuantale::chain_frame(3));
        let m = FinModule::regular(&q, Side::Left);
        let id = QuantaleHom::identity(&q);
        let t = extend_scalars(&id, &q, &m).unwrap();
        let f = ModuleHom::identity(&m);
        let induced = induced_tensor_hom(&id, &m, &f, &m, &t).unwrap();
        for r in q.elements() {
            for x in m.elements() {
                assert_eq!(induced.apply(t.pure(r, x)), q.mult(r, x));
            }
        }
    }

    #[test]
    fn unit_embedding_along_two_into_frame() {
        let two = two();
        let three = Arc::new(FinQuantale::chain_frame(3));
        let h = check_quantale_hom(vec![0, 2], &two, &three).unwrap();
        let n = FinModule::regular(&three, Side::Left);
        // the 3-chain as a 2-module embeds identically into N_h
        let m = restrict_scalars(&h, &two, &n).unwrap();
        let t = extend_scalars(&h, &three, &m).unwrap();
        let emb = tensor_unit_embedding(&h, &m, &ModuleHom::identity(&m), &n, &t).unwrap();
        assert!(emb.injective);
        assert!(emb.witnesses_saturated);

        let collapse = ModuleHom {
            map: SupMap::new(vec![0, 2, 2]),
        };
        assert!(matches!(
            tensor_unit_embedding(&h, &m, &collapse, &n, &t),
            Err(ConstructionError::WitnessNotInjective { .. })
        ));
    }

    #[test]
    fn saturate_is_a_closure() {
        let a = over_two(FinSupLattice::powerset(2), Side::Right);
        let b = over_two(FinSupLattice::chain(3), Side::Left);
        let t = tensor_product(&a, &b).unwrap();
        let c = &t.closure;
        for s in 0u64..(1 << 12) {
            let cs = c.saturate(s);
            assert_eq!(c.violated_generator(s).is_none(), cs == s);
            assert_eq!(cs & s, s);
            assert_eq!(c.saturate(cs), cs);
            assert_eq!(c.violated_generator(cs), None);
            assert!(t.index_of_mask(cs).is_some());
        }
    }
}
