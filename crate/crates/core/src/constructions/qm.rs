//! Pairs `(Q, M)` of a quantale and a module over it, morphisms
//! `(h, f): (Q, M) → (R, N)` with `f: M → N_h`, and their coproducts and
//! pushouts built from tensor products.

use serde::Serialize;

use super::tensor::extend_scalars;
use super::{cartesian, tally, ConstructionError, ModuleProduct, ModulePushout, TensorResult};
use super::{module_product, module_pushout, UniversalCheck};
use crate::module::{
    check_module_hom, module_homs, restrict_scalars, same_quantale, FinModule, ModuleHom,
};
use crate::order::SupMap;
use crate::quantale::{check_quantale_hom, quantale_homs, QuantaleHom, Scalars};

use super::induced_tensor_hom;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QMObject {
    #[serde(skip)]
    pub q: Scalars,
    pub m: FinModule,
}

impl QMObject {
    pub fn new(m: FinModule) -> Self {
        QMObject {
            q: m.scalars().clone(),
            m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QMMorphism {
    pub h: QuantaleHom,
    pub f: ModuleHom,
}

impl QMMorphism {
    pub fn identity(obj: &QMObject) -> Self {
        QMMorphism {
            h: QuantaleHom::identity(&obj.q),
            f: ModuleHom::identity(&obj.m),
        }
    }

    /// `self ∘ first` on tables.
    pub fn after(&self, first: &QMMorphism) -> QMMorphism {
        QMMorphism {
            h: self.h.after(&first.h),
            f: self.f.after(&first.f),
        }
    }

    fn key(&self) -> (Vec<usize>, Vec<usize>) {
        (self.h.map.table.clone(), self.f.map.table.clone())
    }
}

pub fn qm_check(
    h: Vec<usize>,
    f: Vec<usize>,
    source: &QMObject,
    target: &QMObject,
) -> Result<QMMorphism, ConstructionError> {
    let h = check_quantale_hom(h, &source.q, &target.q)?;
    let nh = restrict_scalars(&h, &source.q, &target.m)?;
    let f = check_module_hom(f, &source.m, &nh)
        .map_err(|source| ConstructionError::TargetNotRestricted { source })?;
    Ok(QMMorphism { h, f })
}

/// `(k ∘ h, g ∘ f)` for `(h, f): A → B` and `(k, g): B → C`.
pub fn qm_compose(
    first: &QMMorphism,
    second: &QMMorphism,
    a: &QMObject,
    b: &QMObject,
    c: &QMObject,
) -> Result<QMMorphism, ConstructionError> {
    let fits = |m: &QMMorphism, s: &QMObject, t: &QMObject| {
        m.h.map.table.len() == s.q.len()
            && m.f.map.table.len() == s.m.len()
            && m.h.map.table.iter().all(|&v| v < t.q.len())
            && m.f.map.table.iter().all(|&v| v < t.m.len())
    };
    if !fits(first, a, b) || !fits(second, b, c) {
        return Err(ConstructionError::NotComposable);
    }
    let composite = second.after(first);
    qm_check(composite.h.map.table, composite.f.map.table, a, c)
}

/// All morphisms `source → target`.
pub fn qm_morphisms(source: &QMObject, target: &QMObject) -> Vec<QMMorphism> {
    let mut out = Vec::new();
    for h in quantale_homs(&source.q, &target.q) {
        let nh = restrict_scalars(&h, &source.q, &target.m).expect("valid restriction");
        for f in module_homs(&source.m, &nh) {
            out.push(QMMorphism { h: h.clone(), f });
        }
    }
    out
}

/// Checks that `νᵢ: Qᵢ → R` is a coproduct against each target quantale.
pub fn check_quantale_coproduct(
    family: &[Scalars],
    r: &Scalars,
    nus: &[QuantaleHom],
    targets: &[Scalars],
) -> Result<Vec<UniversalCheck>, ConstructionError> {
    let mut checks = Vec::new();
    for (t, s) in targets.iter().enumerate() {
        let induced = quantale_homs(r, s)
            .into_iter()
            .map(|g| nus.iter().map(|nu| g.after(nu).map.table).collect::<Vec<_>>());
        let legs: Vec<Vec<Vec<usize>>> = family
            .iter()
            .map(|q| quantale_homs(q, s).into_iter().map(|h| h.map.table).collect())
            .collect();
        let check = tally(t, induced, cartesian(&legs));
        if !check.holds() {
            return Err(ConstructionError::NotACoproductWitness {
                target: t,
                detail: format!(
                    "{} of {} cocones without a mediating map, {} with several",
                    check.missing, check.cones, check.duplicated
                ),
            });
        }
        checks.push(check);
    }
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QMCoproduct {
    pub object: QMObject,
    pub tensors: Vec<TensorResult>,
    pub product: ModuleProduct,
    pub injections: Vec<QMMorphism>,
    pub quantale_checks: Vec<UniversalCheck>,
}

/// `(R, ∏ R ⊗_{Qᵢ} Mᵢ)` with injections `(νᵢ, x ↦ μᵢ(1 ⊗ x))`, for a
/// supplied coproduct `νᵢ: Qᵢ → R` verified against `quantale_targets`.
pub fn qm_coproduct(
    family: &[QMObject],
    r: &Scalars,
    nus: &[QuantaleHom],
    quantale_targets: &[Scalars],
) -> Result<QMCoproduct, ConstructionError> {
    if family.is_empty() || family.len() != nus.len() {
        return Err(ConstructionError::IllFormedInputs {
            reason: "need one quantale injection per object".into(),
        });
    }
    for (obj, nu) in family.iter().zip(nus) {
        check_quantale_hom(nu.map.table.clone(), &obj.q, r)?;
    }
    let qs: Vec<Scalars> = family.iter().map(|o| o.q.clone()).collect();
    let quantale_checks = check_quantale_coproduct(&qs, r, nus, quantale_targets)?;
    let tensors = family
        .iter()
        .zip(nus)
        .map(|(obj, nu)| extend_scalars(nu, r, &obj.m))
        .collect::<Result<Vec<_>, _>>()?;
    let modules: Vec<FinModule> = tensors.iter().map(|t| t.module.clone()).collect();
    let product = module_product(&modules)?;
    let object = QMObject::new(product.module.clone());
    let injections = family
        .iter()
        .enumerate()
        .map(|(i, obj)| {
            let table = obj
                .m
                .elements()
                .map(|x| product.injections[i].apply(tensors[i].pure(r.unit(), x)))
                .collect();
            qm_check(nus[i].map.table.clone(), table, obj, &object)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QMCoproduct {
        object,
        tensors,
        product,
        injections,
        quantale_checks,
    })
}

impl QMCoproduct {
    /// For each target, every cocone of morphisms `(Qᵢ, Mᵢ) → (S, N)`
    /// should have exactly one mediating morphism.
    pub fn check_universal(&self, family: &[QMObject], targets: &[QMObject]) -> Vec<UniversalCheck> {
        targets
            .iter()
            .enumerate()
            .map(|(t, target)| {
                let induced = qm_morphisms(&self.object, target).into_iter().map(|g| {
                    self.injections
                        .iter()
                        .map(|inj| g.after(inj).key())
                        .collect::<Vec<_>>()
                });
                let legs: Vec<Vec<(Vec<usize>, Vec<usize>)>> = family
                    .iter()
                    .map(|obj| qm_morphisms(obj, target).iter().map(QMMorphism::key).collect())
                    .collect();
                tally(t, induced, cartesian(&legs))
            })
            .collect()
    }

    /// The mediating morphism for a cocone, assembled from the quantale
    /// coproduct and the maps `r ⊗ x ↦ r·fᵢ(x)`.
    pub fn mediating(
        &self,
        family: &[QMObject],
        target: &QMObject,
        cocone: &[QMMorphism],
    ) -> Result<QMMorphism, ConstructionError> {
        let r = &self.object.q;
        let nus: Vec<&QuantaleHom> = self.injections.iter().map(|inj| &inj.h).collect();
        let h = quantale_homs(r, &target.q)
            .into_iter()
            .find(|g| nus.iter().zip(cocone).all(|(nu, c)| g.after(nu) == c.h))
            .ok_or_else(|| ConstructionError::IllFormedInputs {
                reason: "no quantale map extends the cocone".into(),
            })?;
        let nh = restrict_scalars(&h, r, &target.m)?;
        let parts = family
            .iter()
            .enumerate()
            .map(|(i, obj)| induced_tensor_hom(nus[i], &obj.m, &cocone[i].f, &nh, &self.tensors[i]))
            .collect::<Result<Vec<_>, _>>()?;
        let table = self
            .object
            .m
            .elements()
            .map(|p| {
                let coords = self.product.decode(p);
                nh.lattice()
                    .join_all(parts.iter().zip(coords).map(|(g, c)| g.apply(c)))
            })
            .collect();
        qm_check(h.map.table, table, &self.object, target)
    }
}

/// A quantale pushout square `k₁ h₁ = k₂ h₂` into `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PushoutSquare {
    #[serde(skip)]
    pub r: Scalars,
    pub k1: QuantaleHom,
    pub k2: QuantaleHom,
}

/// An `R`-module `P` with an embedding `Mᵢ → P_{kᵢ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingWitness {
    pub module: FinModule,
    pub map: ModuleHom,
}

pub fn check_quantale_pushout(
    q: &Scalars,
    q1: &Scalars,
    q2: &Scalars,
    h1: &QuantaleHom,
    h2: &QuantaleHom,
    square: &PushoutSquare,
    targets: &[Scalars],
) -> Result<Vec<UniversalCheck>, ConstructionError> {
    check_quantale_hom(h1.map.table.clone(), q, q1)?;
    check_quantale_hom(h2.map.table.clone(), q, q2)?;
    check_quantale_hom(square.k1.map.table.clone(), q1, &square.r)?;
    check_quantale_hom(square.k2.map.table.clone(), q2, &square.r)?;
    if square.k1.after(h1) != square.k2.after(h2) {
        return Err(ConstructionError::NotAPushoutWitness {
            target: 0,
            detail: "square does not commute".into(),
        });
    }
    let mut checks = Vec::new();
    for (t, s) in targets.iter().enumerate() {
        let induced = quantale_homs(&square.r, s)
            .into_iter()
            .map(|g| (g.after(&square.k1).map.table, g.after(&square.k2).map.table));
        let g2s = quantale_homs(q2, s);
        let mut cones = Vec::new();
        for g1 in quantale_homs(q1, s) {
            for g2 in &g2s {
                if g1.after(h1) == g2.after(h2) {
                    cones.push((g1.map.table.clone(), g2.map.table.clone()));
                }
            }
        }
        let check = tally(t, induced, cones);
        if !check.holds() {
            return Err(ConstructionError::NotAPushoutWitness {
                target: t,
                detail: format!(
                    "{} of {} cones without a mediating map, {} with several",
                    check.missing, check.cones, check.duplicated
                ),
            });
        }
        checks.push(check);
    }
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QMPushout {
    pub object: QMObject,
    pub module_pushout: ModulePushout,
    pub tensor: TensorResult,
    pub legs: [QMMorphism; 2],
    pub quantale_checks: Vec<UniversalCheck>,
    /// Set when every input map is injective: whether both legs are
    /// injective in the module component.
    pub amalgam: Option<bool>,
}

/// `(R, R ⊗_Q N)` for a span `(Q₁, M₁) ← (Q, M) → (Q₂, M₂)`, where `N` is
/// the pushout of `(M₁)_{h₁} ← M → (M₂)_{h₂}` over `Q` and `R` the supplied
/// quantale pushout.
#[allow(clippy::too_many_arguments)]
pub fn qm_pushout(
    source: &QMObject,
    left: &QMObject,
    right: &QMObject,
    s1: &QMMorphism,
    s2: &QMMorphism,
    square: &PushoutSquare,
    witnesses: [Option<&EmbeddingWitness>; 2],
    quantale_targets: &[Scalars],
) -> Result<QMPushout, ConstructionError> {
    let s1 = qm_check(s1.h.map.table.clone(), s1.f.map.table.clone(), source, left)?;
    let s2 = qm_check(s2.h.map.table.clone(), s2.f.map.table.clone(), source, right)?;
    let quantale_checks = check_quantale_pushout(
        &source.q,
        &left.q,
        &right.q,
        &s1.h,
        &s2.h,
        square,
        quantale_targets,
    )?;
    let r = &square.r;
    for (index, (witness, (obj, k))) in witnesses
        .iter()
        .zip([(left, &square.k1), (right, &square.k2)])
        .enumerate()
    {
        let missing = |detail: String| ConstructionError::MissingEmbeddingWitness { index, detail };
        let w = witness.ok_or_else(|| missing("not supplied".into()))?;
        if !same_quantale(w.module.scalars(), r) {
            return Err(missing("witness module is not over R".into()));
        }
        let pk = restrict_scalars(k, &obj.q, &w.module)?;
        check_module_hom(w.map.map.table.clone(), &obj.m, &pk)
            .map_err(|e| missing(format!("not a morphism: {e}")))?;
        if !w.map.is_injective() {
            return Err(missing("not injective".into()));
        }
    }
    let m1h = restrict_scalars(&s1.h, &source.q, &left.m)?;
    let m2h = restrict_scalars(&s2.h, &source.q, &right.m)?;
    let pushout = module_pushout(&source.m, &m1h, &m2h, &s1.f, &s2.f)?;
    let h = square.k1.after(&s1.h);
    let tensor = extend_scalars(&h, r, &pushout.module)?;
    let object = QMObject::new(tensor.module.clone());
    let leg = |i: usize, obj: &QMObject, k: &QuantaleHom| {
        let table = obj
            .m
            .elements()
            .map(|x| tensor.pure(r.unit(), pushout.legs[i].apply(x)))
            .collect();
        qm_check(k.map.table.clone(), table, obj, &object)
    };
    let legs = [leg(0, left, &square.k1)?, leg(1, right, &square.k2)?];
    let all_injective = [&s1.h.map, &s2.h.map, &square.k1.map, &square.k2.map]
        .iter()
        .all(|m| SupMap::is_injective(m))
        && s1.f.is_injective()
        && s2.f.is_injective();
    let amalgam = all_injective.then(|| legs.iter().all(|l| l.f.is_injective()));
    Ok(QMPushout {
        object,
        module_pushout: pushout,
        tensor,
        legs,
        quantale_checks,
        amalgam,
    })
}

impl QMPushout {
    /// For each target, every commuting pair of morphisms out of the two
    /// sides should factor uniquely through the legs.
    pub fn check_universal(
        &self,
        left: &QMObject,
        right: &QMObject,
        s1: &QMMorphism,
        s2: &QMMorphism,
        targets: &[QMObject],
    ) -> Vec<UniversalCheck> {
        targets
            .iter()
            .enumerate()
            .map(|(t, target)| {
                let induced = qm_morphisms(&self.object, target)
                    .into_iter()
                    .map(|g| (g.after(&self.legs[0]).key(), g.after(&self.legs[1]).key()));
                let c2s = qm_morphisms(right, target);
                let mut cones = Vec::new();
                for c1 in qm_morphisms(left, target) {
                    for c2 in &c2s {
                        if c1.after(s1) == c2.after(s2) {
                            cones.push((c1.key(), c2.key()));
                        }
                    }
                }
                tally(t, induced, cones)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::module::Side;
    use crate::order::FinSupLattice;
    use crate::quantale::FinQuantale;
    use crate::search::lattice_isomorphism;

    fn two() -> Scalars {
        Arc::new(FinQuantale::two())
    }

    fn frame3() -> Scalars {
        Arc::new(FinQuantale::chain_frame(3))
    }

    #[test]
    fn identity_and_composition() {
        let q = frame3();
        let a = QMObject::new(FinModule::regular(&q, Side::Left));
        let id = QMMorphism::identity(&a);
        let checked = qm_check(id.h.map.table.clone(), id.f.map.table.clone(), &a, &a).unwrap();
        assert_eq!(checked, id);
        assert_eq!(qm_compose(&id, &id, &a, &a, &a).unwrap(), id);
    }

    #[test]
    fn composition_is_associative_on_a_triple() {
        let t = two();
        let q = frame3();
        let a = QMObject::new(FinModule::over_two_with(&t, FinSupLattice::chain(2)));
        let b = QMObject::new(FinModule::regular(&q, Side::Left));
        let c = QMObject::new(FinModule::over_two_with(&t, FinSupLattice::chain(3)));
        for f in qm_morphisms(&a, &b) {
            for g in qm_morphisms(&b, &c) {
                for k in qm_morphisms(&c, &c) {
                    let left = qm_compose(&qm_compose(&f, &g, &a, &b, &c).unwrap(), &k, &a, &c, &c);
                    let right = qm_compose(&f, &qm_compose(&g, &k, &b, &c, &c).unwrap(), &a, &b, &c);
                    assert_eq!(left.unwrap(), right.unwrap());
                }
            }
        }
    }

    #[test]
    fn action_breaking_second_component() {
        let q = frame3();
        let a = QMObject::new(FinModule::regular(&q, Side::Left));
        let err = qm_check(vec![0, 1, 2], vec![0, 2, 2], &a, &a).unwrap_err();
        assert!(matches!(err, ConstructionError::TargetNotRestricted { .. }));
    }

    #[test]
    fn coproduct_of_two_chains_over_two() {
        let t = two();
        let c2 = QMObject::new(FinModule::over_two_with(&t, FinSupLattice::chain(2)));
        let family = [c2.clone(), c2.clone()];
        let id = QuantaleHom::identity(&t);
        let targets_q = [t.clone(), frame3()];
        let cp = qm_coproduct(&family, &t, &[id.clone(), id], &targets_q).unwrap();
        assert!(lattice_isomorphism(cp.object.m.lattice(), &FinSupLattice::powerset(2)).is_isomorphic());
        let targets = [
            c2.clone(),
            QMObject::new(FinModule::over_two_with(&t, FinSupLattice::powerset(2))),
        ];
        for check in cp.check_universal(&family, &targets) {
            assert!(check.holds(), "{check:?}");
        }
    }

    #[test]
    fn mediating_morphism_matches_enumeration() {
        let t = two();
        let q = frame3();
        let m = QMObject::new(FinModule::over_two_with(&t, FinSupLattice::chain(3)));
        let rq = QMObject::new(FinModule::regular(&q, Side::Left));
        let family = [m.clone(), rq.clone()];
        let nu1 = check_quantale_hom(vec![0, 2], &t, &q).unwrap();
        let nu2 = QuantaleHom::identity(&q);
        let cp = qm_coproduct(&family, &q, &[nu1, nu2], &[t.clone(), q.clone()]).unwrap();
        let target = rq.clone();
        let all = qm_morphisms(&cp.object, &target);
        for c1 in qm_morphisms(&m, &target) {
            for c2 in qm_morphisms(&rq, &target) {
                let cocone = [c1.clone(), c2.clone()];
                let built = cp.mediating(&family, &target, &cocone).unwrap();
                let found: Vec<&QMMorphism> = all
                    .iter()
                    .filter(|g| g.after(&cp.injections[0]) == c1 && g.after(&cp.injections[1]) == c2)
                    .collect();
                assert_eq!(found, vec![&built]);
            }
        }
    }

    #[test]
    fn trivial_pushout_span() {
        let q = frame3();
        let m = QMObject::new(FinModule::regular(&q, Side::Left));
        let id = QMMorphism::identity(&m);
        let square = PushoutSquare {
            r: q.clone(),
            k1: QuantaleHom::identity(&q),
            k2: QuantaleHom::identity(&q),
        };
        let w = EmbeddingWitness {
            module: m.m.clone(),
            map: ModuleHom::identity(&m.m),
        };
        let p = qm_pushout(&m, &m, &m, &id, &id, &square, [Some(&w), Some(&w)], std::slice::from_ref(&q)).unwrap();
        assert_eq!(p.object.m.len(), 3);
        assert_eq!(p.amalgam, Some(true));
        for check in p.check_universal(&m, &m, &id, &id, std::slice::from_ref(&m)) {
            assert!(check.holds(), "{check:?}");
        }
    }

    #[test]
    fn missing_witness_is_refused() {
        let q = frame3();
        let m = QMObject::new(FinModule::regular(&q, Side::Left));
        let id = QMMorphism::identity(&m);
        let square = PushoutSquare {
            r: q.clone(),
            k1: QuantaleHom::identity(&q),
            k2: QuantaleHom::identity(&q),
        };
        let err = qm_pushout(&m, &m, &m, &id, &id, &square, [None, None], std::slice::from_ref(&q)).unwrap_err();
        assert!(matches!(err, ConstructionError::MissingEmbeddingWitness { index: 0, .. }));
    }
}
