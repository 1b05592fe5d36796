//! Finite products of modules, which are also their coproducts.

use serde::Serialize;

use super::{cartesian, tally, ConstructionError, UniversalCheck};
use crate::module::{check_module_sided, module_homs, FinModule, ModuleHom};
use crate::order::{check_suplattice, SupMap};

/// Largest product carrier materialized.
pub const PRODUCT_BOUND: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleProduct {
    pub module: FinModule,
    pub sizes: Vec<usize>,
    pub projections: Vec<ModuleHom>,
    pub injections: Vec<ModuleHom>,
}

impl ModuleProduct {
    /// Mixed-radix index of a tuple, first coordinate most significant.
    pub fn encode(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&c, &n)| acc * n + c)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.sizes.len()];
        for (c, &n) in coords.iter_mut().zip(&self.sizes).rev() {
            *c = index % n;
            index /= n;
        }
        coords
    }

    /// Checks the coproduct property against each target: every family of
    /// morphisms `Mᵢ → T` factors uniquely through the injections.
    pub fn check_coproduct(&self, factors: &[FinModule], targets: &[FinModule]) -> Vec<UniversalCheck> {
        targets
            .iter()
            .enumerate()
            .map(|(t, target)| {
                let induced = module_homs(&self.module, target).into_iter().map(|g| {
                    self.injections
                        .iter()
                        .map(|mu| g.after(mu).map.table)
                        .collect::<Vec<_>>()
                });
                let legs: Vec<Vec<Vec<usize>>> = factors
                    .iter()
                    .map(|m| module_homs(m, target).into_iter().map(|f| f.map.table).collect())
                    .collect();
                tally(t, induced, cartesian(&legs))
            })
            .collect()
    }

    /// Checks the product property: every family `T → Mᵢ` factors uniquely
    /// through the projections.
    pub fn check_product(&self, factors: &[FinModule], targets: &[FinModule]) -> Vec<UniversalCheck> {
        targets
            .iter()
            .enumerate()
            .map(|(t, source)| {
                let induced = module_homs(source, &self.module).into_iter().map(|g| {
                    self.projections
                        .iter()
                        .map(|p| p.after(&g).map.table)
                        .collect::<Vec<_>>()
                });
                let legs: Vec<Vec<Vec<usize>>> = factors
                    .iter()
                    .map(|m| module_homs(source, m).into_iter().map(|f| f.map.table).collect())
                    .collect();
                tally(t, induced, cartesian(&legs))
            })
            .collect()
    }
}

pub fn module_product(family: &[FinModule]) -> Result<ModuleProduct, ConstructionError> {
    let Some(first) = family.first() else {
        return Err(ConstructionError::IllFormedInputs {
            reason: "empty family".into(),
        });
    };
    if family
        .iter()
        .any(|m| !m.same_scalars(first) || m.side() != first.side())
    {
        return Err(ConstructionError::IllFormedInputs {
            reason: "factors differ in scalars or side".into(),
        });
    }
    let sizes: Vec<usize> = family.iter().map(FinModule::len).collect();
    let size = sizes
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .filter(|&s| s <= PRODUCT_BOUND)
        .ok_or(ConstructionError::SizeBound {
            size: sizes.iter().product(),
            bound: PRODUCT_BOUND,
        })?;
    let mut shell = ModuleProduct {
        module: first.clone(),
        sizes,
        projections: Vec::new(),
        injections: Vec::new(),
    };
    let tuples: Vec<Vec<usize>> = (0..size).map(|i| shell.decode(i)).collect();
    let names = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t
                .iter()
                .zip(family)
                .map(|(&c, m)| m.lattice().name(c))
                .collect();
            if parts.len() == 1 {
                parts[0].to_string()
            } else {
                format!("({})", parts.join(","))
            }
        })
        .collect();
    let leq = tuples
        .iter()
        .map(|s| {
            tuples
                .iter()
                .map(|t| family.iter().enumerate().all(|(i, m)| m.leq(s[i], t[i])))
                .collect()
        })
        .collect();
    let lattice = check_suplattice(names, leq)?;
    let action = first
        .scalars()
        .elements()
        .map(|a| {
            tuples
                .iter()
                .map(|t| {
                    let image: Vec<usize> =
                        family.iter().enumerate().map(|(i, m)| m.act(a, t[i])).collect();
                    shell.encode(&image)
                })
                .collect()
        })
        .collect();
    let module = check_module_sided(first.scalars(), lattice, action, first.side())?;
    let projections = (0..family.len())
        .map(|i| ModuleHom {
            map: SupMap::new(tuples.iter().map(|t| t[i]).collect()),
        })
        .collect();
    let injections = family
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let table = m
                .elements()
                .map(|x| {
                    let coords: Vec<usize> = family
                        .iter()
                        .enumerate()
                        .map(|(j, n)| if j == i { x } else { n.bottom() })
                        .collect();
                    shell.encode(&coords)
                })
                .collect();
            ModuleHom {
                map: SupMap::new(table),
            }
        })
        .collect();
    shell.module = module;
    shell.projections = projections;
    shell.injections = injections;
    Ok(shell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::check_module_hom;
    use crate::order::FinSupLattice;
    use crate::search::lattice_isomorphism;

    #[test]
    fn single_factor() {
        let m = FinModule::over_two(FinSupLattice::chain(3));
        let p = module_product(std::slice::from_ref(&m)).unwrap();
        assert_eq!(p.module.action_table(), m.action_table());
        assert_eq!(p.module.lattice().leq_table(), m.lattice().leq_table());
    }

    #[test]
    fn two_times_two_is_diamond() {
        let c2 = FinModule::over_two(FinSupLattice::chain(2));
        let p = module_product(&[c2.clone(), c2.clone()]).unwrap();
        assert!(lattice_isomorphism(p.module.lattice(), &FinSupLattice::powerset(2)).is_isomorphic());
        for (i, mu) in p.injections.iter().enumerate() {
            check_module_hom(mu.map.table.clone(), &c2, &p.module).unwrap();
            check_module_hom(p.projections[i].map.table.clone(), &p.module, &c2).unwrap();
        }
    }

    #[test]
    fn universal_properties_by_enumeration() {
        let c2 = FinModule::over_two(FinSupLattice::chain(2));
        let family = [c2.clone(), c2.clone()];
        let p = module_product(&family).unwrap();
        let targets = [
            c2.clone(),
            FinModule::over_two(FinSupLattice::chain(3)),
            FinModule::over_two(FinSupLattice::powerset(2)),
        ];
        for check in p.check_coproduct(&family, &targets) {
            assert!(check.holds(), "{check:?}");
            assert!(check.cones > 0);
        }
        for check in p.check_product(&family, &targets) {
            assert!(check.holds(), "{check:?}");
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        let family = [
            FinModule::over_two(FinSupLattice::chain(2)),
            FinModule::over_two(FinSupLattice::chain(3)),
        ];
        let p = module_product(&family).unwrap();
        for i in 0..6 {
            assert_eq!(p.encode(&p.decode(i)), i);
        }
    }
}
