//! Finite quantale modules, module morphisms, restriction of scalars and
//! nuclei with their closed systems.

use std::sync::Arc;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::order::{check_suplattice, FinSupLattice, LatticeError, SupMap};
use crate::quantale::{FinQuantale, QuantaleHom, Scalars};
use crate::search::{enumerate_join_maps, find_isomorphism, IsoOutcome};

/// Which side the scalars act on. A right module stores `x·a` at
/// `action[a][x]`, so associativity reads `x·(ab) = (x·a)·b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum ModuleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("action table has wrong shape")]
    Shape,
    #[error("action entry out of range at {witness:?}")]
    OutOfRange { witness: [usize; 2] },
    #[error("action is not associative at scalars {a}, {b} and element {x}")]
    ActionNotAssociative { a: usize, b: usize, x: usize },
    #[error("unit does not act as identity on {x}")]
    UnitLawFails { x: usize },
    #[error("action does not preserve joins at {witness:?}")]
    NotBilinearlyJoinPreserving { witness: Vec<usize> },
    #[error("modules are over different quantales")]
    ScalarsDiffer,
    #[error("modules act on different sides")]
    SideMismatch,
    #[error("map does not preserve joins (witness subset {witness:?})")]
    JoinNotPreserved { witness: Vec<usize> },
    #[error("map does not commute with the action of {a} on {x}")]
    ActionNotPreserved { a: usize, x: usize },
    #[error("closure is not extensive at {x}")]
    NotExtensive { x: usize },
    #[error("closure is not monotone at {x} <= {y}")]
    NotMonotone { x: usize, y: usize },
    #[error("closure is not idempotent at {x}")]
    NotIdempotent { x: usize },
    #[error("a·γ(x) <= γ(a·x) fails for a = {a}, x = {x}")]
    NotStructural { a: usize, x: usize },
    #[error("quantale homomorphism does not match the scalars")]
    HomMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinModule {
    #[serde(skip)]
    scalars: Scalars,
    lattice: FinSupLattice,
    action: Vec<Vec<usize>>,
    side: Side,
}

pub fn check_module(
    scalars: &Scalars,
    lattice: FinSupLattice,
    action: Vec<Vec<usize>>,
) -> Result<FinModule, ModuleError> {
    check_module_sided(scalars, lattice, action, Side::Left)
}

pub fn check_module_sided(
    scalars: &Scalars,
    lattice: FinSupLattice,
    action: Vec<Vec<usize>>,
    side: Side,
) -> Result<FinModule, ModuleError> {
    let q = scalars.as_ref();
    let n = lattice.len();
    if action.len() != q.len() || action.iter().any(|row| row.len() != n) {
        return Err(ModuleError::Shape);
    }
    for a in q.elements() {
        for x in 0..n {
            if action[a][x] >= n {
                return Err(ModuleError::OutOfRange { witness: [a, x] });
            }
        }
    }
    for a in q.elements() {
        for b in q.elements() {
            for x in 0..n {
                let (lhs, rhs) = match side {
                    Side::Left => (action[q.mult(a, b)][x], action[a][action[b][x]]),
                    Side::Right => (action[q.mult(a, b)][x], action[b][action[a][x]]),
                };
                if lhs != rhs {
                    return Err(ModuleError::ActionNotAssociative { a, b, x });
                }
            }
        }
    }
    for x in 0..n {
        if action[q.unit()][x] != x {
            return Err(ModuleError::UnitLawFails { x });
        }
    }
    let bot = lattice.bottom();
    for a in q.elements() {
        if action[a][bot] != bot {
            return Err(ModuleError::NotBilinearlyJoinPreserving { witness: vec![a, bot] });
        }
    }
    for x in 0..n {
        if action[q.bottom()][x] != bot {
            return Err(ModuleError::NotBilinearlyJoinPreserving {
                witness: vec![q.bottom(), x],
            });
        }
    }
    for a in q.elements() {
        for x in 0..n {
            for y in x + 1..n {
                if action[a][lattice.join(x, y)] != lattice.join(action[a][x], action[a][y]) {
                    return Err(ModuleError::NotBilinearlyJoinPreserving {
                        witness: vec![a, x, y],
                    });
                }
            }
        }
    }
    for a in q.elements() {
        for b in a + 1..q.len() {
            let ab = q.lattice().join(a, b);
            for x in 0..n {
                if action[ab][x] != lattice.join(action[a][x], action[b][x]) {
                    return Err(ModuleError::NotBilinearlyJoinPreserving {
                        witness: vec![a, b, x],
                    });
                }
            }
        }
    }
    Ok(FinModule {
        scalars: scalars.clone(),
        lattice,
        action,
        side,
    })
}

impl FinModule {
    /// A quantale acting on itself by multiplication from the given side.
    pub fn regular(scalars: &Scalars, side: Side) -> Self {
        let q = scalars.as_ref();
        let action = q
            .elements()
            .map(|a| {
                q.elements()
                    .map(|x| match side {
                        Side::Left => q.mult(a, x),
                        Side::Right => q.mult(x, a),
                    })
                    .collect()
            })
            .collect();
        check_module_sided(scalars, q.lattice().clone(), action, side)
            .expect("regular modules are modules")
    }

    /// A sup-lattice as a module over the two-element quantale.
    pub fn over_two(lattice: FinSupLattice) -> Self {
        Self::over_two_with(&Arc::new(FinQuantale::two()), lattice)
    }

    pub fn over_two_with(two: &Scalars, lattice: FinSupLattice) -> Self {
        let bot = lattice.bottom();
        let action = vec![vec![bot; lattice.len()], lattice.elements().collect()];
        check_module(two, lattice, action).expect("sup-lattices are 2-modules")
    }

    pub fn scalars(&self) -> &Scalars {
        &self.scalars
    }

    pub fn lattice(&self) -> &FinSupLattice {
        &self.lattice
    }

    pub fn act(&self, a: usize, x: usize) -> usize {
        self.action[a][x]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
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

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.lattice.leq(x, y)
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.lattice.join(x, y)
    }

    pub fn same_scalars(&self, other: &FinModule) -> bool {
        same_quantale(&self.scalars, &other.scalars)
    }

    /// Same structure read on the other side; valid when the scalars are
    /// commutative.
    pub fn with_side(&self, side: Side) -> Result<FinModule, ModuleError> {
        check_module_sided(&self.scalars, self.lattice.clone(), self.action.clone(), side)
    }
}

pub(crate) fn same_quantale(a: &Scalars, b: &Scalars) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ModuleHom {
    pub map: SupMap,
}

impl ModuleHom {
    pub fn identity(m: &FinModule) -> Self {
        ModuleHom {
            map: SupMap::identity(m.len()),
        }
    }

    pub fn zero(source: &FinModule, target: &FinModule) -> Self {
        ModuleHom {
            map: SupMap::new(vec![target.bottom(); source.len()]),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    /// `self ∘ first`
    pub fn after(&self, first: &ModuleHom) -> ModuleHom {
        ModuleHom {
            map: self.map.after(&first.map),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.map.is_injective()
    }
}

pub fn check_module_hom(
    table: Vec<usize>,
    source: &FinModule,
    target: &FinModule,
) -> Result<ModuleHom, ModuleError> {
    if !source.same_scalars(target) {
        return Err(ModuleError::ScalarsDiffer);
    }
    if source.side != target.side {
        return Err(ModuleError::SideMismatch);
    }
    let map = SupMap::new(table);
    map.check_total(source.lattice(), target.lattice())?;
    if let Some(witness) = map.join_witness(source.lattice(), target.lattice()) {
        return Err(ModuleError::JoinNotPreserved { witness });
    }
    for a in source.scalars.elements() {
        for x in source.elements() {
            if map.apply(source.act(a, x)) != target.act(a, map.apply(x)) {
                return Err(ModuleError::ActionNotPreserved { a, x });
            }
        }
    }
    Ok(ModuleHom { map })
}

/// All module morphisms `source → target`, sorted by table.
pub fn module_homs(source: &FinModule, target: &FinModule) -> Vec<ModuleHom> {
    module_homs_with(source, target, &[])
}

/// Module morphisms with some values prescribed.
pub fn module_homs_with(
    source: &FinModule,
    target: &FinModule,
    fixed: &[(usize, usize)],
) -> Vec<ModuleHom> {
    if !source.same_scalars(target) || source.side != target.side {
        return Vec::new();
    }
    let q = source.scalars.clone();
    let n = source.len();
    let mut preimages: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for a in q.elements() {
        for y in 0..n {
            preimages[source.act(a, y)].push((a, y));
        }
    }
    enumerate_join_maps(source.lattice(), target.lattice(), fixed, |f, x| {
        let fx = f[x].unwrap();
        q.elements().all(|a| match f[source.act(a, x)] {
            Some(v) => v == target.act(a, fx),
            None => true,
        }) && preimages[x].iter().all(|&(a, y)| match f[y] {
            Some(fy) => target.act(a, fy) == fx,
            None => true,
        })
    })
    .into_iter()
    .map(|map| ModuleHom { map })
    .collect()
}

/// `N_h`: the `R`-module `n` seen as a module over `source` via
/// `a ·_h x = h(a)·x`.
pub fn restrict_scalars(
    h: &QuantaleHom,
    source: &Scalars,
    n: &FinModule,
) -> Result<FinModule, ModuleError> {
    if h.map.table.len() != source.len() || h.map.table.iter().any(|&v| v >= n.scalars.len()) {
        return Err(ModuleError::HomMismatch);
    }
    let action = source
        .elements()
        .map(|a| n.elements().map(|x| n.act(h.apply(a), x)).collect())
        .collect();
    check_module_sided(source, n.lattice.clone(), action, n.side)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Nucleus {
    #[serde(skip)]
    module: FinModule,
    table: Vec<usize>,
}

pub fn check_nucleus(table: Vec<usize>, module: &FinModule) -> Result<Nucleus, ModuleError> {
    let n = module.len();
    if table.len() != n {
        return Err(LatticeError::MapArity {
            expected: n,
            found: table.len(),
        }
        .into());
    }
    if let Some((x, &v)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
        return Err(LatticeError::MapOutOfRange {
            source_index: x,
            image: v,
            size: n,
        }
        .into());
    }
    for x in 0..n {
        if !module.leq(x, table[x]) {
            return Err(ModuleError::NotExtensive { x });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if module.leq(x, y) && !module.leq(table[x], table[y]) {
                return Err(ModuleError::NotMonotone { x, y });
            }
        }
    }
    for x in 0..n {
        if table[table[x]] != table[x] {
            return Err(ModuleError::NotIdempotent { x });
        }
    }
    for a in module.scalars.elements() {
        for x in 0..n {
            if !module.leq(module.act(a, table[x]), table[module.act(a, x)]) {
                return Err(ModuleError::NotStructural { a, x });
            }
        }
    }
    Ok(Nucleus {
        module: module.clone(),
        table,
    })
}

impl Nucleus {
    pub fn module(&self) -> &FinModule {
        &self.module
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&x| self.table[x] == x).collect()
    }
}

/// The closed system `M_γ` with the corestriction `γ: M → M_γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageModule {
    pub module: FinModule,
    /// `fixed[i]` is the element of `M` behind index `i` of `M_γ`.
    pub fixed: Vec<usize>,
    pub surjection: ModuleHom,
}

pub fn image_module(gamma: &Nucleus) -> ImageModule {
    let m = &gamma.module;
    let fixed = gamma.fixed_points();
    let mut position = vec![usize::MAX; m.len()];
    for (i, &x) in fixed.iter().enumerate() {
        position[x] = i;
    }
    let names = fixed.iter().map(|&x| m.lattice.name(x).to_string()).collect();
    let leq = fixed
        .iter()
        .map(|&x| fixed.iter().map(|&y| m.leq(x, y)).collect())
        .collect();
    let lattice = check_suplattice(names, leq).expect("fixed points of a closure form a lattice");
    let action = m
        .scalars
        .elements()
        .map(|a| fixed.iter().map(|&x| position[gamma.apply(m.act(a, x))]).collect())
        .collect();
    let module = check_module_sided(&m.scalars, lattice, action, m.side)
        .expect("closed system of a nucleus is a module");
    let surjection = ModuleHom {
        map: SupMap::new(m.elements().map(|x| position[gamma.apply(x)]).collect()),
    };
    ImageModule {
        module,
        fixed,
        surjection,
    }
}

/// `hom(Q, N) ≅ N` through `g ↦ g(1)`, with inverse `y ↦ (r ↦ r·y)`.
pub fn hom_from_element(n: &FinModule, y: usize) -> ModuleHom {
    let q = n.scalars.as_ref();
    ModuleHom {
        map: SupMap::new(q.elements().map(|r| n.act(r, y)).collect()),
    }
}

/// Evaluates every morphism from the regular module into `n` at the unit
/// and checks that this is a bijection onto `n` inverse to
/// [`hom_from_element`].
pub fn check_unit_bijection(n: &FinModule) -> Result<usize, Vec<usize>> {
    let regular = FinModule::regular(&n.scalars, n.side);
    let homs = module_homs(&regular, n);
    let unit = n.scalars.unit();
    let mut images: Vec<usize> = homs.iter().map(|g| g.apply(unit)).collect();
    for g in &homs {
        if hom_from_element(n, g.apply(unit)) != *g {
            return Err(g.map.table.clone());
        }
    }
    images.sort();
    images.dedup();
    if images.len() != homs.len() || images.len() != n.len() {
        return Err(images);
    }
    for y in n.elements() {
        let g = hom_from_element(n, y);
        if check_module_hom(g.map.table.clone(), &regular, n).is_err() {
            return Err(vec![y]);
        }
    }
    Ok(homs.len())
}

pub fn module_isomorphism(a: &FinModule, b: &FinModule, budget: Duration) -> IsoOutcome {
    if !a.same_scalars(b) || a.side != b.side {
        return IsoOutcome::NotIsomorphic;
    }
    let q = a.scalars.clone();
    find_isomorphism(a.lattice(), b.lattice(), budget, |f, x| {
        let fx = f[x].unwrap();
        q.elements().all(|s| match f[a.act(s, x)] {
            Some(v) => v == b.act(s, fx),
            None => true,
        }) && a.elements().all(|y| {
            let Some(fy) = f[y] else { return true };
            q.elements().all(|s| a.act(s, y) != x || b.act(s, fy) == fx)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{check_quantale_hom, powerset_quantale, FinMonoid};

    fn diamond() -> FinSupLattice {
        FinSupLattice::powerset(2)
    }

    #[test]
    fn sup_lattices_are_two_modules() {
        for l in [FinSupLattice::chain(2), FinSupLattice::chain(4), diamond()] {
            let m = FinModule::over_two(l);
            assert_eq!(m.act(0, m.top()), m.bottom());
        }
    }

    #[test]
    fn regular_modules_validate() {
        let qs = [
            FinQuantale::two(),
            FinQuantale::chain_frame(3),
            powerset_quantale(&FinMonoid::cyclic(3)).unwrap(),
        ];
        for q in qs {
            let q = Arc::new(q);
            FinModule::regular(&q, Side::Left);
            FinModule::regular(&q, Side::Right);
        }
    }

    #[test]
    fn unit_law_failure() {
        let two = Arc::new(FinQuantale::two());
        let err = check_module(&two, FinSupLattice::chain(2), vec![vec![0, 0], vec![0, 0]])
            .unwrap_err();
        assert_eq!(err, ModuleError::UnitLawFails { x: 1 });
    }

    #[test]
    fn restriction_along_identity_and_composites() {
        let two = Arc::new(FinQuantale::two());
        let three = Arc::new(FinQuantale::chain_frame(3));
        let n = FinModule::regular(&three, Side::Left);
        let id = QuantaleHom::identity(&three);
        assert_eq!(restrict_scalars(&id, &three, &n).unwrap(), n);

        let h = check_quantale_hom(vec![0, 2], &two, &three).unwrap();
        let nh = restrict_scalars(&h, &two, &n).unwrap();
        assert_eq!(nh, FinModule::over_two_with(&two, three.lattice().clone()));

        // 2 -> 3 -> 3 via the identity: functoriality
        let k = QuantaleHom::identity(&three);
        let step = restrict_scalars(&h, &two, &restrict_scalars(&k, &three, &n).unwrap()).unwrap();
        let direct = restrict_scalars(&k.after(&h), &two, &n).unwrap();
        assert_eq!(step, direct);
    }

    #[test]
    fn nucleus_examples() {
        let m = FinModule::over_two(diamond());
        check_nucleus(vec![0, 1, 2, 3], &m).unwrap();
        check_nucleus(vec![3, 3, 3, 3], &m).unwrap();
        // powerset(2): 0 = ⊥, 1 = a, 2 = b, 3 = ⊤; swapping a and b
        assert_eq!(
            check_nucleus(vec![0, 2, 1, 3], &m).unwrap_err(),
            ModuleError::NotExtensive { x: 1 }
        );
    }

    #[test]
    fn image_of_nuclei() {
        let m = FinModule::over_two(diamond());
        let top = image_module(&check_nucleus(vec![3, 3, 3, 3], &m).unwrap());
        assert_eq!(top.module.len(), 1);

        let gamma = check_nucleus(vec![0, 1, 3, 3], &m).unwrap();
        let img = image_module(&gamma);
        assert_eq!(img.fixed, vec![0, 1, 3]);
        assert!(crate::search::lattice_isomorphism(img.module.lattice(), &FinSupLattice::chain(3))
            .is_isomorphic());
        check_module_hom(img.surjection.map.table.clone(), &m, &img.module).unwrap();
        assert!(img.surjection.map.is_surjective(img.module.len()));
    }

    #[test]
    fn action_breaking_map_is_caught() {
        let q = Arc::new(FinQuantale::chain_frame(3));
        let m = FinModule::regular(&q, Side::Left);
        // identity is fine, the join map 0,2,2 fails at e·⊤ = e
        check_module_hom(vec![0, 1, 2], &m, &m).unwrap();
        assert_eq!(
            check_module_hom(vec![0, 2, 2], &m, &m).unwrap_err(),
            ModuleError::ActionNotPreserved { a: 1, x: 1 }
        );
    }

    #[test]
    fn hom_enumeration_matches_filter() {
        let q = Arc::new(FinQuantale::chain_frame(3));
        let m = FinModule::regular(&q, Side::Left);
        let n = check_module(
            &q,
            diamond(),
            vec![vec![0, 0, 0, 0], vec![0, 0, 2, 2], vec![0, 1, 2, 3]],
        );
        let targets: Vec<FinModule> = std::iter::once(m.clone()).chain(n.ok()).collect();
        for t in &targets {
            let fast = module_homs(&m, t);
            let slow: Vec<ModuleHom> = enumerate_join_maps(m.lattice(), t.lattice(), &[], |_, _| true)
                .into_iter()
                .filter_map(|f| check_module_hom(f.table, &m, t).ok())
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn unit_bijection() {
        let q = Arc::new(powerset_quantale(&FinMonoid::cyclic(2)).unwrap());
        for side in [Side::Left, Side::Right] {
            let m = FinModule::regular(&q, side);
            assert_eq!(check_unit_bijection(&m), Ok(4));
        }
        let m = FinModule::over_two(diamond());
        assert_eq!(check_unit_bijection(&m), Ok(4));
    }

    #[test]
    fn module_isomorphism_respects_action() {
        let q = Arc::new(FinQuantale::chain_frame(3));
        let m = FinModule::regular(&q, Side::Left);
        // same lattice, action with e acting as identity
        let other = check_module(
            &q,
            FinSupLattice::chain(3),
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 1, 2]],
        )
        .unwrap();
        assert!(module_isomorphism(&m, &m, Duration::from_secs(1)).is_isomorphic());
        assert_eq!(
            module_isomorphism(&m, &other, Duration::from_secs(1)),
            IsoOutcome::NotIsomorphic
        );
    }
}
