//! Pushouts of module spans, as quotients of the product by the relation
//! identifying the two images of the common source.

use serde::Serialize;

use super::{tally, ConstructionError, ModuleProduct, Saturation, UniversalCheck};
use super::{module_product, saturated_elements};
use crate::module::{check_module_hom, module_homs, FinModule, ModuleHom};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulePushout {
    pub module: FinModule,
    pub legs: [ModuleHom; 2],
    pub coproduct: ModuleProduct,
    pub saturation: Saturation,
}

/// Pushout of `M₁ ← M → M₂` along `f₁`, `f₂`.
pub fn module_pushout(
    m: &FinModule,
    m1: &FinModule,
    m2: &FinModule,
    f1: &ModuleHom,
    f2: &ModuleHom,
) -> Result<ModulePushout, ConstructionError> {
    check_module_hom(f1.map.table.clone(), m, m1)?;
    check_module_hom(f2.map.table.clone(), m, m2)?;
    let coproduct = module_product(&[m1.clone(), m2.clone()])?;
    let [mu1, mu2] = [&coproduct.injections[0], &coproduct.injections[1]];
    let relation: Vec<(usize, usize)> = m
        .elements()
        .map(|x| (mu1.apply(f1.apply(x)), mu2.apply(f2.apply(x))))
        .collect();
    let saturation = saturated_elements(&coproduct.module, &relation)?;
    let legs = [
        saturation.projection.after(mu1),
        saturation.projection.after(mu2),
    ];
    Ok(ModulePushout {
        module: saturation.quotient.clone(),
        legs,
        coproduct,
        saturation,
    })
}

impl ModulePushout {
    /// For each target, every commuting pair `g₁ f₁ = g₂ f₂` should factor
    /// uniquely through the legs.
    pub fn check_universal(
        &self,
        m1: &FinModule,
        m2: &FinModule,
        f1: &ModuleHom,
        f2: &ModuleHom,
        targets: &[FinModule],
    ) -> Vec<UniversalCheck> {
        targets
            .iter()
            .enumerate()
            .map(|(t, target)| {
                let induced = module_homs(&self.module, target).into_iter().map(|u| {
                    (
                        u.after(&self.legs[0]).map.table,
                        u.after(&self.legs[1]).map.table,
                    )
                });
                let g2s = module_homs(m2, target);
                let mut cones = Vec::new();
                for g1 in module_homs(m1, target) {
                    for g2 in &g2s {
                        if g1.after(f1) == g2.after(f2) {
                            cones.push((g1.map.table.clone(), g2.map.table.clone()));
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
    use super::*;
    use crate::order::{FinSupLattice, SupMap};

    fn two_module(l: FinSupLattice) -> FinModule {
        FinModule::over_two(l)
    }

    #[test]
    fn identity_span_gives_source() {
        let m = two_module(FinSupLattice::chain(3));
        let id = ModuleHom::identity(&m);
        let p = module_pushout(&m, &m, &m, &id, &id).unwrap();
        assert_eq!(p.module.len(), 3);
        assert!(p.check_universal(&m, &m, &id, &id, std::slice::from_ref(&m))[0].holds());
    }

    #[test]
    fn zero_span_gives_coproduct() {
        let m = two_module(FinSupLattice::chain(2));
        let m1 = two_module(FinSupLattice::chain(3));
        let m2 = two_module(FinSupLattice::chain(2));
        let z1 = ModuleHom::zero(&m, &m1);
        let z2 = ModuleHom::zero(&m, &m2);
        let p = module_pushout(&m, &m1, &m2, &z1, &z2).unwrap();
        assert_eq!(p.module.len(), 6);
    }

    #[test]
    fn chain_into_two_diamonds() {
        let m = two_module(FinSupLattice::chain(2));
        let d = two_module(FinSupLattice::powerset(2));
        // 1 ↦ a in the first diamond, 1 ↦ b in the second
        let f1 = ModuleHom { map: SupMap::new(vec![0, 1]) };
        let f2 = ModuleHom { map: SupMap::new(vec![0, 2]) };
        let p = module_pushout(&m, &d, &d, &f1, &f2).unwrap();
        assert_eq!(p.legs[0].after(&f1), p.legs[1].after(&f2));
        // 2³ glued along one atom: a Boolean algebra on three atoms
        assert_eq!(p.module.len(), 8);
        let targets = [two_module(FinSupLattice::chain(2)), d.clone()];
        for check in p.check_universal(&d, &d, &f1, &f2, &targets) {
            assert!(check.holds(), "{check:?}");
        }
    }
}
