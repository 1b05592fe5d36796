//! Bundled quantales, modules and nuclei, the instance lists the checks run
//! over, and single-entry mutation testing of the verifiers.

use std::sync::Arc;

use serde::Serialize;

use crate::constructions::qm::{EmbeddingWitness, PushoutSquare, QMMorphism, QMObject};
use crate::module::{check_module, check_module_sided, check_nucleus, FinModule, ModuleHom};
use crate::module::{restrict_scalars, Nucleus, Side};
use crate::oracle::naive;
use crate::order::{check_suplattice, FinSupLattice, SupMap};
use crate::quantale::{check_monoid, check_quantale, powerset_quantale, quantale_homs};
use crate::quantale::{FinMonoid, FinQuantale, QuantaleHom, Scalars};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

fn named<T>(name: &str, value: T) -> Named<T> {
    Named {
        name: name.to_string(),
        value,
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub quantales: Vec<Named<Scalars>>,
    pub modules: Vec<Named<FinModule>>,
    pub nuclei: Vec<Named<Nucleus>>,
}

/// The pentagon: `⊥ < a < c < ⊤` and `⊥ < b < ⊤`.
pub fn n5() -> FinSupLattice {
    let below = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (3, 4)];
    let mut leq = vec![vec![false; 5]; 5];
    for i in 0..5 {
        leq[i][i] = true;
    }
    for (i, j) in below {
        leq[i][j] = true;
    }
    let names = ["bot", "a", "b", "c", "top"].map(String::from).to_vec();
    check_suplattice(names, leq).expect("N5 is a lattice")
}

pub fn diamond() -> FinSupLattice {
    let names = ["bot", "a", "b", "top"].map(String::from).to_vec();
    let leq = (0..4)
        .map(|i: usize| (0..4).map(|j: usize| i & !j == 0).collect())
        .collect();
    check_suplattice(names, leq).expect("diamond is a lattice")
}

fn named_chain(names: &[&str]) -> FinSupLattice {
    let n = names.len();
    let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
    check_suplattice(names.iter().map(|s| s.to_string()).collect(), leq).expect("chain")
}

pub fn frame3() -> FinQuantale {
    let mult = (0..3).map(|a| (0..3).map(|b| a.min(b)).collect()).collect();
    check_quantale(named_chain(&["bot", "e", "top"]), mult, 2).expect("frame")
}

/// Łukasiewicz three-element chain, `a ⊗ b = max(0, a + b − 1)` on
/// `{0, ½, 1}`.
pub fn luk3() -> FinQuantale {
    let mult = (0..3usize)
        .map(|a| (0..3usize).map(|b| (a + b).saturating_sub(2)).collect())
        .collect();
    check_quantale(named_chain(&["0", "half", "1"]), mult, 2).expect("MV-chain")
}

/// The Boolean algebra on two atoms with meet as product.
pub fn frame_diamond() -> FinQuantale {
    let mult = (0..4).map(|a| (0..4).map(|b| a & b).collect()).collect();
    check_quantale(diamond(), mult, 3).expect("Boolean frame")
}

/// `{1, z}` with `z·z = z`.
pub fn idempotent_monoid() -> FinMonoid {
    check_monoid(
        vec!["1".into(), "z".into()],
        vec![vec![0, 1], vec![1, 1]],
        0,
    )
    .expect("monoid")
}

/// `{1, l, r}` with `l`, `r` left zeros: `xy = x` for `x ≠ 1`.
pub fn left_zero_monoid() -> FinMonoid {
    check_monoid(
        vec!["1".into(), "l".into(), "r".into()],
        vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
        0,
    )
    .expect("monoid")
}

/// `P(Z₂)` acting on the diamond, `{g}` swapping the atoms.
fn swap_diamond(pz2: &Scalars) -> FinModule {
    let swap = |x: usize| ((x & 1) << 1) | (x >> 1);
    let action = (0..4usize)
        .map(|s| {
            (0..4usize)
                .map(|x| {
                    let mut out = 0;
                    if s & 1 == 1 {
                        out |= x;
                    }
                    if s & 2 == 2 {
                        out |= swap(x);
                    }
                    out
                })
                .collect()
        })
        .collect();
    check_module(pz2, diamond(), action).expect("swap action")
}

impl Catalog {
    pub fn builtin() -> Self {
        let two: Scalars = Arc::new(FinQuantale::two());
        let f3: Scalars = Arc::new(frame3());
        let l3: Scalars = Arc::new(luk3());
        let pz2: Scalars = Arc::new(powerset_quantale(&FinMonoid::cyclic(2)).expect("P(Z2)"));
        let pidem: Scalars = Arc::new(powerset_quantale(&idempotent_monoid()).expect("P(M)"));
        let fd: Scalars = Arc::new(frame_diamond());
        let plz: Scalars = Arc::new(powerset_quantale(&left_zero_monoid()).expect("P(L)"));

        let mut modules = vec![
            named("2/c2", FinModule::over_two_with(&two, FinSupLattice::chain(2))),
            named("2/c3", FinModule::over_two_with(&two, FinSupLattice::chain(3))),
            named("2/c4", FinModule::over_two_with(&two, FinSupLattice::chain(4))),
            named("2/diamond", FinModule::over_two_with(&two, diamond())),
            named("2/n5", FinModule::over_two_with(&two, n5())),
        ];
        for (name, q) in [
            ("frame3", &f3),
            ("luk3", &l3),
            ("pz2", &pz2),
            ("pidem", &pidem),
            ("frame-diamond", &fd),
            ("plz", &plz),
        ] {
            modules.push(named(&format!("{name}/reg"), FinModule::regular(q, Side::Left)));
        }
        modules.push(named("plz/reg-right", FinModule::regular(&plz, Side::Right)));
        // e acts as min(x, 1)
        let c4_action = vec![
            vec![0, 0, 0, 0],
            vec![0, 1, 1, 1],
            vec![0, 1, 2, 3],
        ];
        modules.push(named(
            "frame3/c4",
            check_module(&f3, FinSupLattice::chain(4), c4_action).expect("module"),
        ));
        // e acts as meet with a
        let diamond_action = vec![vec![0; 4], vec![0, 1, 0, 1], vec![0, 1, 2, 3]];
        modules.push(named(
            "frame3/diamond",
            check_module(&f3, diamond(), diamond_action).expect("module"),
        ));
        modules.push(named("pz2/swap-diamond", swap_diamond(&pz2)));

        let mut nuclei = Vec::new();
        for m in &modules {
            let n = m.value.len();
            nuclei.push(named(
                &format!("{}/id", m.name),
                check_nucleus((0..n).collect(), &m.value).expect("identity nucleus"),
            ));
            nuclei.push(named(
                &format!("{}/top", m.name),
                check_nucleus(vec![m.value.top(); n], &m.value).expect("top nucleus"),
            ));
        }
        let extra: [(&str, &str, Vec<usize>); 5] = [
            ("2/diamond", "2/diamond/b-up", vec![0, 1, 3, 3]),
            ("2/c3", "2/c3/collapse", vec![0, 2, 2]),
            ("frame3/reg", "frame3/reg/join-e", vec![1, 1, 2]),
            ("luk3/reg", "luk3/reg/join-half", vec![1, 1, 2]),
            ("pz2/swap-diamond", "pz2/swap-diamond/atoms-up", vec![0, 3, 3, 3]),
        ];
        for (module, name, table) in extra {
            let m = &modules.iter().find(|m| m.name == module).expect("module").value;
            nuclei.push(named(name, check_nucleus(table, m).expect("nucleus")));
        }

        Catalog {
            quantales: vec![
                named("2", two),
                named("frame3", f3),
                named("luk3", l3),
                named("pz2", pz2),
                named("pidem", pidem),
                named("frame-diamond", fd),
                named("plz", plz),
            ],
            modules,
            nuclei,
        }
    }

    pub fn quantale(&self, name: &str) -> Option<&Scalars> {
        self.quantales.iter().find(|q| q.name == name).map(|q| &q.value)
    }

    pub fn module(&self, name: &str) -> Option<&FinModule> {
        self.modules.iter().find(|m| m.name == name).map(|m| &m.value)
    }

    pub fn structure_count(&self) -> usize {
        self.quantales.len() + self.modules.len() + self.nuclei.len()
    }

    /// Left modules over the named quantale.
    pub fn modules_over<'a>(&'a self, q: &'a Scalars) -> impl Iterator<Item = &'a Named<FinModule>> {
        self.modules.iter().filter(move |m| {
            m.value.side() == Side::Left && crate::module::same_quantale(m.value.scalars(), q)
        })
    }

    /// Pairs `(M₁, M₂)` over one quantale of size at most `max_q`, `M₁`
    /// read as a right module, with `|M₁|·|M₂| ≤ max_pairs`.
    pub fn tensor_pairs(&self, max_q: usize, max_pairs: usize) -> Vec<(String, FinModule, FinModule)> {
        let mut out = Vec::new();
        for q in self.quantales.iter().filter(|q| q.value.len() <= max_q) {
            let over: Vec<&Named<FinModule>> = self.modules_over(&q.value).collect();
            for a in &over {
                let Ok(right) = a.value.with_side(Side::Right) else {
                    continue;
                };
                for b in &over {
                    if a.value.len() * b.value.len() <= max_pairs {
                        out.push((format!("{} ⊗ {}", a.name, b.name), right.clone(), b.value.clone()));
                    }
                }
            }
        }
        out
    }

    /// Triples `(h: Q → R, M over Q, N over R)` with `|R|·|M| ≤ max_pairs`
    /// and `|N| ≤ max_n`.
    pub fn adjunction_triples(&self, max_pairs: usize, max_n: usize) -> Vec<AdjunctionTriple> {
        let spans = [
            ("2", "2"),
            ("2", "frame3"),
            ("2", "pz2"),
            ("frame3", "2"),
            ("frame3", "frame3"),
            ("pidem", "2"),
        ];
        let mut out = Vec::new();
        for (qn, rn) in spans {
            let (q, r) = (self.quantale(qn).unwrap(), self.quantale(rn).unwrap());
            for h in quantale_homs(q, r) {
                for m in self.modules_over(q) {
                    if r.len() * m.value.len() > max_pairs {
                        continue;
                    }
                    for n in self.modules_over(r).filter(|n| n.value.len() <= max_n) {
                        out.push(AdjunctionTriple {
                            name: format!("{qn}→{rn} {:?}; {}; {}", h.map.table, m.name, n.name),
                            h: h.clone(),
                            r: r.clone(),
                            m: m.value.clone(),
                            n: n.value.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn coproduct_instances(&self) -> Vec<CoproductInstance> {
        let q = |n: &str| self.quantale(n).unwrap().clone();
        let m = |n: &str| QMObject::new(self.module(n).unwrap().clone());
        let id = |n: &str| QuantaleHom::identity(self.quantale(n).unwrap());
        let unit_into = |n: &str| {
            let r = self.quantale(n).unwrap();
            QuantaleHom {
                map: SupMap::new(vec![r.bottom(), r.unit()]),
            }
        };
        vec![
            CoproductInstance {
                name: "(2, c2)".into(),
                family: vec![m("2/c2")],
                r: q("2"),
                nus: vec![id("2")],
            },
            CoproductInstance {
                name: "(2, c2) + (2, c2)".into(),
                family: vec![m("2/c2"), m("2/c2")],
                r: q("2"),
                nus: vec![id("2"), id("2")],
            },
            CoproductInstance {
                name: "(2, diamond) + (frame3, frame3)".into(),
                family: vec![m("2/diamond"), m("frame3/reg")],
                r: q("frame3"),
                nus: vec![unit_into("frame3"), id("frame3")],
            },
            CoproductInstance {
                name: "(frame3, frame3)".into(),
                family: vec![m("frame3/reg")],
                r: q("frame3"),
                nus: vec![id("frame3")],
            },
            CoproductInstance {
                name: "(2, c2) + (pz2, pz2)".into(),
                family: vec![m("2/c2"), m("pz2/reg")],
                r: q("pz2"),
                nus: vec![unit_into("pz2"), id("pz2")],
            },
        ]
    }

    /// Small quantales used to test coproduct and pushout witnesses.
    pub fn quantale_targets(&self) -> Vec<Scalars> {
        ["2", "frame3", "luk3", "pz2", "pidem"]
            .iter()
            .map(|n| self.quantale(n).unwrap().clone())
            .collect()
    }

    /// Small objects that cocones are enumerated into.
    pub fn qm_targets(&self) -> Vec<QMObject> {
        ["2/c2", "2/c3", "frame3/reg", "frame3/c4", "pz2/reg"]
            .iter()
            .map(|n| QMObject::new(self.module(n).unwrap().clone()))
            .collect()
    }

    pub fn pushout_instances(&self) -> Vec<PushoutInstance> {
        let q = |n: &str| self.quantale(n).unwrap().clone();
        let m = |n: &str| self.module(n).unwrap().clone();
        let two = q("2");
        let f3 = q("frame3");
        let id2 = QuantaleHom::identity(&two);
        let id3 = QuantaleHom::identity(&f3);
        let hom = |t: Vec<usize>| ModuleHom {
            map: SupMap::new(t),
        };
        let mut out = Vec::new();

        // glue two diamonds along a 2-chain over 2
        let c2 = QMObject::new(m("2/c2"));
        let d = QMObject::new(m("2/diamond"));
        out.push(PushoutInstance {
            name: "diamond ← c2 → diamond over 2".into(),
            source: c2.clone(),
            left: d.clone(),
            right: d.clone(),
            s1: QMMorphism { h: id2.clone(), f: hom(vec![0, 1]) },
            s2: QMMorphism { h: id2.clone(), f: hom(vec![0, 2]) },
            square: PushoutSquare { r: two.clone(), k1: id2.clone(), k2: id2.clone() },
            witnesses: [
                EmbeddingWitness { module: d.m.clone(), map: ModuleHom::identity(&d.m) },
                EmbeddingWitness { module: d.m.clone(), map: ModuleHom::identity(&d.m) },
            ],
        });

        // frame3 embedded into the 4-chain module and into itself
        let reg = QMObject::new(m("frame3/reg"));
        let c4 = QMObject::new(m("frame3/c4"));
        out.push(PushoutInstance {
            name: "frame3 ← frame3 → c4 over frame3".into(),
            source: reg.clone(),
            left: reg.clone(),
            right: c4.clone(),
            s1: QMMorphism::identity(&reg),
            s2: QMMorphism { h: id3.clone(), f: hom(vec![0, 1, 3]) },
            square: PushoutSquare { r: f3.clone(), k1: id3.clone(), k2: id3.clone() },
            witnesses: [
                EmbeddingWitness { module: reg.m.clone(), map: ModuleHom::identity(&reg.m) },
                EmbeddingWitness { module: c4.m.clone(), map: ModuleHom::identity(&c4.m) },
            ],
        });

        // a surjective quantale map frame3 → 2 on one side
        let collapse = QuantaleHom { map: SupMap::new(vec![0, 0, 1]) };
        let c2_over_2 = m("2/c2");
        let c3_over_2 = m("2/c3");
        let source = QMObject::new(restrict_scalars(&collapse, &f3, &c2_over_2).expect("restriction"));
        let right = QMObject::new(restrict_scalars(&collapse, &f3, &c3_over_2).expect("restriction"));
        let left = QMObject::new(c2_over_2.clone());
        out.push(PushoutInstance {
            name: "c2 ← c2 → c3 along frame3 → 2".into(),
            source,
            left,
            right,
            s1: QMMorphism { h: collapse.clone(), f: hom(vec![0, 1]) },
            s2: QMMorphism { h: id3.clone(), f: hom(vec![0, 2]) },
            square: PushoutSquare { r: two.clone(), k1: id2.clone(), k2: collapse.clone() },
            witnesses: [
                EmbeddingWitness { module: c2_over_2.clone(), map: ModuleHom::identity(&c2_over_2) },
                EmbeddingWitness { module: c3_over_2.clone(), map: ModuleHom::identity(&c3_over_2) },
            ],
        });
        out
    }

    /// A span with non-surjective quantale maps where `x ↦ 1 ⊗ nᵢ(x)` fails
    /// to be a morphism out of `(Q₁, M₁)`.
    pub fn pushout_counterexample(&self) -> PushoutInstance {
        let two = self.quantale("2").unwrap().clone();
        let f3 = self.quantale("frame3").unwrap().clone();
        let unit = QuantaleHom { map: SupMap::new(vec![0, 2]) };
        let id2 = QuantaleHom::identity(&two);
        let id3 = QuantaleHom::identity(&f3);
        let point = FinModule::over_two_with(&two, FinSupLattice::chain(1));
        let reg = self.module("frame3/reg").unwrap().clone();
        let c2 = self.module("2/c2").unwrap().clone();
        let c2_in_reg = ModuleHom { map: SupMap::new(vec![0, 2]) };
        PushoutInstance {
            name: "frame3 ← 0 → c2 along 2 → frame3".into(),
            source: QMObject::new(point.clone()),
            left: QMObject::new(reg.clone()),
            right: QMObject::new(c2.clone()),
            s1: QMMorphism { h: unit.clone(), f: ModuleHom { map: SupMap::new(vec![0]) } },
            s2: QMMorphism { h: id2, f: ModuleHom { map: SupMap::new(vec![0]) } },
            square: PushoutSquare { r: f3, k1: id3, k2: unit },
            witnesses: [
                EmbeddingWitness { module: reg.clone(), map: ModuleHom::identity(&reg) },
                EmbeddingWitness { module: reg, map: c2_in_reg },
            ],
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdjunctionTriple {
    pub name: String,
    pub h: QuantaleHom,
    pub r: Scalars,
    pub m: FinModule,
    pub n: FinModule,
}

#[derive(Debug, Clone)]
pub struct CoproductInstance {
    pub name: String,
    pub family: Vec<QMObject>,
    pub r: Scalars,
    pub nus: Vec<QuantaleHom>,
}

#[derive(Debug, Clone)]
pub struct PushoutInstance {
    pub name: String,
    pub source: QMObject,
    pub left: QMObject,
    pub right: QMObject,
    pub s1: QMMorphism,
    pub s2: QMMorphism,
    pub square: PushoutSquare,
    pub witnesses: [EmbeddingWitness; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    pub structures: usize,
    pub mutations: usize,
    pub rejected: usize,
    /// Mutations the independent axiom check finds invalid.
    pub invalid: usize,
    /// Invalid mutations the verifiers accepted.
    pub missed: usize,
    /// Valid mutations the verifiers rejected.
    pub false_rejections: usize,
    /// Mutations that produced another valid structure.
    pub survivors: Vec<String>,
}

impl MutationReport {
    pub fn ratio(&self) -> f64 {
        if self.mutations == 0 {
            1.0
        } else {
            self.rejected as f64 / self.mutations as f64
        }
    }

    /// Share of the invalid mutations that the verifiers reject.
    pub fn detection(&self) -> f64 {
        if self.invalid == 0 {
            1.0
        } else {
            (self.invalid - self.missed) as f64 / self.invalid as f64
        }
    }

    fn record(&mut self, rejected: bool, valid: bool, describe: impl FnOnce() -> String) {
        self.mutations += 1;
        self.invalid += usize::from(!valid);
        self.missed += usize::from(!valid && !rejected);
        self.false_rejections += usize::from(valid && rejected);
        if rejected {
            self.rejected += 1;
        } else {
            self.survivors.push(describe());
        }
    }
}

fn flipped(leq: &[Vec<bool>], i: usize, j: usize) -> Vec<Vec<bool>> {
    let mut out = leq.to_vec();
    out[i][j] = !out[i][j];
    out
}

/// Replaces each table entry of each structure by every other in-range
/// value (and flips each order entry) and re-runs the verifier.
pub fn mutation_report(catalog: &Catalog) -> MutationReport {
    let mut report = MutationReport {
        structures: catalog.structure_count(),
        ..Default::default()
    };
    for q in &catalog.quantales {
        let q = q.value.as_ref();
        let (n, l) = (q.len(), q.lattice());
        let mult = q.mult_table().to_vec();
        for a in 0..n {
            for b in 0..n {
                for v in (0..n).filter(|&v| v != mult[a][b]) {
                    let mut t = mult.clone();
                    t[a][b] = v;
                    let valid = naive::is_quantale(l.leq_table(), &t, q.unit());
                    let ok = check_quantale(l.clone(), t, q.unit()).is_ok();
                    report.record(!ok, valid, || format!("quantale mult[{a}][{b}] = {v}"));
                }
            }
        }
        for u in (0..n).filter(|&u| u != q.unit()) {
            let valid = naive::is_quantale(l.leq_table(), &mult, u);
            let ok = check_quantale(l.clone(), mult.clone(), u).is_ok();
            report.record(!ok, valid, || format!("quantale unit = {u}"));
        }
        for i in 0..n {
            for j in 0..n {
                let leq = flipped(l.leq_table(), i, j);
                let valid = naive::is_quantale(&leq, &mult, q.unit());
                let ok = check_suplattice(l.names().to_vec(), leq)
                    .map_err(|_| ())
                    .and_then(|l2| check_quantale(l2, mult.clone(), q.unit()).map_err(|_| ()))
                    .is_ok();
                report.record(!ok, valid, || format!("quantale leq[{i}][{j}] flipped"));
            }
        }
    }
    for m in &catalog.modules {
        let (name, m) = (&m.name, &m.value);
        let action = m.action_table().to_vec();
        let n = m.len();
        let q = m.scalars();
        let right = m.side() == Side::Right;
        let naive_module = |leq: &[Vec<bool>], t: &[Vec<usize>]| {
            naive::is_module(q.lattice().leq_table(), q.mult_table(), q.unit(), leq, t, right)
        };
        for a in 0..action.len() {
            for x in 0..n {
                for v in (0..n).filter(|&v| v != action[a][x]) {
                    let mut t = action.clone();
                    t[a][x] = v;
                    let valid = naive_module(m.lattice().leq_table(), &t);
                    let ok = check_module_sided(m.scalars(), m.lattice().clone(), t, m.side()).is_ok();
                    report.record(!ok, valid, || format!("{name}: action[{a}][{x}] = {v}"));
                }
            }
        }
        let l = m.lattice();
        for i in 0..n {
            for j in 0..n {
                let leq = flipped(l.leq_table(), i, j);
                let valid = naive_module(&leq, &action);
                let ok = check_suplattice(l.names().to_vec(), leq)
                    .map_err(|_| ())
                    .and_then(|l2| {
                        check_module_sided(m.scalars(), l2, action.clone(), m.side()).map_err(|_| ())
                    })
                    .is_ok();
                report.record(!ok, valid, || format!("{name}: leq[{i}][{j}] flipped"));
            }
        }
    }
    for g in &catalog.nuclei {
        let table = g.value.table();
        let m = g.value.module();
        for x in 0..table.len() {
            for v in (0..table.len()).filter(|&v| v != table[x]) {
                let mut t = table.to_vec();
                t[x] = v;
                let valid = naive::is_nucleus(m.lattice().leq_table(), m.action_table(), &t);
                let ok = check_nucleus(t, m).is_ok();
                report.record(!ok, valid, || format!("{}: γ({x}) = {v}", g.name));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_validates() {
        let c = Catalog::builtin();
        assert!(c.structure_count() >= 12);
        assert!(!c.quantale("plz").unwrap().is_commutative());
        assert_eq!(c.coproduct_instances().len(), 5);
        assert_eq!(c.pushout_instances().len(), 3);
    }

    #[test]
    fn n5_is_not_distributive() {
        let l = n5();
        let (a, b, c) = (1, 2, 3);
        assert_ne!(l.meet(c, l.join(a, b)), l.join(l.meet(c, a), l.meet(c, b)));
    }

    #[test]
    fn restriction_along_catalog_homs_is_valid() {
        let c = Catalog::builtin();
        for t in c.adjunction_triples(20, 5) {
            restrict_scalars(&t.h, t.m.scalars(), &t.n).unwrap();
        }
    }
}
