//! Quotients of modules presented by saturated elements.

use serde::Serialize;

use super::ConstructionError;
use crate::module::{check_module_sided, FinModule, ModuleHom};
use crate::order::{check_suplattice, SupMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Saturation {
    /// Saturated elements of the original module, in index order.
    pub saturated: Vec<usize>,
    /// `sat[x]` is the least saturated element above `x`.
    pub sat: Vec<usize>,
    /// The saturated elements as a module, with `⋁` and action followed by
    /// `sat`. Index `i` stands for `saturated[i]`.
    pub quotient: FinModule,
    /// `x ↦ sat(x)` into the quotient.
    pub projection: ModuleHom,
}

/// `s` is saturated iff `a·v ≤ s ⟺ a·w ≤ s` for every pair and scalar.
pub fn is_saturated(m: &FinModule, relation: &[(usize, usize)], s: usize) -> bool {
    relation.iter().all(|&(v, w)| {
        m.scalars()
            .elements()
            .all(|a| m.leq(m.act(a, v), s) == m.leq(m.act(a, w), s))
    })
}

pub fn saturated_elements(
    m: &FinModule,
    relation: &[(usize, usize)],
) -> Result<Saturation, ConstructionError> {
    if let Some(index) = relation
        .iter()
        .position(|&(v, w)| v >= m.len() || w >= m.len())
    {
        return Err(ConstructionError::BadRelation { index });
    }
    let saturated: Vec<usize> = m
        .elements()
        .filter(|&s| is_saturated(m, relation, s))
        .collect();
    // saturated elements are closed under meets and include ⊤
    let l = m.lattice();
    let sat: Vec<usize> = m
        .elements()
        .map(|x| {
            saturated
                .iter()
                .copied()
                .filter(|&s| l.leq(x, s))
                .fold(l.top(), |acc, s| l.meet(acc, s))
        })
        .collect();
    let mut position = vec![usize::MAX; m.len()];
    for (i, &s) in saturated.iter().enumerate() {
        position[s] = i;
    }
    let names = saturated.iter().map(|&s| l.name(s).to_string()).collect();
    let leq = saturated
        .iter()
        .map(|&x| saturated.iter().map(|&y| l.leq(x, y)).collect())
        .collect();
    let lattice = check_suplattice(names, leq)?;
    let action = m
        .scalars()
        .elements()
        .map(|a| {
            saturated
                .iter()
                .map(|&x| position[sat[m.act(a, x)]])
                .collect()
        })
        .collect();
    let quotient = check_module_sided(m.scalars(), lattice, action, m.side())?;
    let projection = ModuleHom {
        map: SupMap::new(sat.iter().map(|&s| position[s]).collect()),
    };
    Ok(Saturation {
        saturated,
        sat,
        quotient,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::check_module_hom;
    use crate::order::FinSupLattice;

    fn diamond() -> FinModule {
        FinModule::over_two(FinSupLattice::powerset(2))
    }

    #[test]
    fn empty_relation_keeps_everything() {
        let m = diamond();
        let s = saturated_elements(&m, &[]).unwrap();
        assert_eq!(s.saturated, vec![0, 1, 2, 3]);
        assert_eq!(s.sat, vec![0, 1, 2, 3]);
    }

    #[test]
    fn bottom_top_collapses() {
        let m = diamond();
        let s = saturated_elements(&m, &[(0, 3)]).unwrap();
        // brute force: ⊥ ≤ s always, so only ⊤ qualifies
        let brute: Vec<usize> = (0..4).filter(|&s| m.leq(3, s)).collect();
        assert_eq!(s.saturated, brute);
        assert_eq!(s.quotient.len(), 1);
    }

    #[test]
    fn identifying_atoms_gives_three_chain() {
        let m = diamond();
        let s = saturated_elements(&m, &[(1, 2)]).unwrap();
        assert_eq!(s.saturated, vec![0, 3]);
        // a ~ b forces a = a∨b = ⊤
        assert_eq!(s.quotient.len(), 2);
        check_module_hom(s.projection.map.table.clone(), &m, &s.quotient).unwrap();
    }

    #[test]
    fn comparable_pair_on_a_chain() {
        let m = FinModule::over_two(FinSupLattice::chain(4));
        let s = saturated_elements(&m, &[(1, 2)]).unwrap();
        assert_eq!(s.saturated, vec![0, 2, 3]);
        assert_eq!(s.sat, vec![0, 2, 2, 3]);
    }
}
