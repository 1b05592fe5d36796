//! JSON documents for structures, spans and instances, and name lookup in
//! the bundled catalogue extended by `QF_CATALOG_DIR`.
//!
//! Parsing and validation are separate steps: a document that does not
//! parse is an input error, while one that parses but breaks an axiom is a
//! [`LoadError::Invalid`] carrying the verifier's witness.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Named};
use crate::combinators::{CombinatorError, Interpretation, Translation};
use crate::logic::{DeductiveSystem, Derivation, Statement, Step};
use crate::constructions::qm::{EmbeddingWitness, PushoutSquare, QMMorphism, QMObject};
use crate::module::{check_module_sided, check_nucleus, FinModule, ModuleHom, Nucleus, Side};
use crate::order::{check_suplattice_with_bound, FinSupLattice, SupMap, FULL_SUBSET_CHECK_BOUND};
use crate::quantale::{check_monoid, check_quantale, powerset_quantale_with_bound, FinQuantale, QuantaleHom, Scalars};
use crate::quantale::POWERSET_MONOID_BOUND;

pub const CATALOG_DIR_VAR: &str = "QF_CATALOG_DIR";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoadError {
    /// Unreadable, unparsable or unresolvable input.
    Input { message: String },
    /// Parsed, but a verifier rejected it.
    Invalid {
        what: String,
        message: String,
        witness: serde_json::Value,
    },
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Input { message } => write!(f, "{message}"),
            LoadError::Invalid { what, message, .. } => write!(f, "{what}: {message}"),
        }
    }
}

impl std::error::Error for LoadError {}

pub fn input_error(message: impl Into<String>) -> LoadError {
    LoadError::Input { message: message.into() }
}

fn invalid<E: std::fmt::Display + Serialize>(what: impl Into<String>, e: E) -> LoadError {
    LoadError::Invalid {
        what: what.into(),
        message: e.to_string(),
        witness: serde_json::to_value(&e).unwrap_or(serde_json::Value::Null),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    pub leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantaleDoc {
    pub lattice: LatticeDoc,
    pub mult: Vec<Vec<usize>>,
    pub unit: usize,
}

/// A finite monoid, standing for its powerset quantale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDoc {
    pub elements: Vec<String>,
    pub op: Vec<Vec<usize>>,
    pub unit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantaleRef {
    Name(String),
    Quantale(QuantaleDoc),
    Monoid(MonoidDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub scalars: QuantaleRef,
    pub lattice: LatticeDoc,
    pub action: Vec<Vec<usize>>,
    #[serde(default)]
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleRef {
    Name(String),
    Inline(Box<ModuleDoc>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NucleusDoc {
    pub module: ModuleRef,
    pub table: Vec<usize>,
}

/// Any structure `verify` accepts, told apart by its fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureDoc {
    Nucleus(NucleusDoc),
    Module(ModuleDoc),
    Quantale(QuantaleDoc),
    Monoid(MonoidDoc),
    Lattice(LatticeDoc),
}

#[derive(Debug, Clone)]
pub enum Structure {
    Lattice(FinSupLattice),
    Quantale(Scalars),
    Module(FinModule),
    Nucleus(Nucleus),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Lattice(_) => "lattice",
            Structure::Quantale(_) => "quantale",
            Structure::Module(_) => "module",
            Structure::Nucleus(_) => "nucleus",
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Structure::Lattice(l) => l.len(),
            Structure::Quantale(q) => q.len(),
            Structure::Module(m) => m.len(),
            Structure::Nucleus(n) => n.module().len(),
        }
    }
}

/// `{"h": quantale map table, "f": module map table}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub h: Vec<usize>,
    pub f: Vec<usize>,
}

impl MorphismDoc {
    pub fn to_morphism(&self) -> QMMorphism {
        QMMorphism {
            h: QuantaleHom { map: SupMap::new(self.h.clone()) },
            f: ModuleHom { map: SupMap::new(self.f.clone()) },
        }
    }

    pub fn from_morphism(m: &QMMorphism) -> Self {
        MorphismDoc {
            h: m.h.map.table.clone(),
            f: m.f.map.table.clone(),
        }
    }
}

/// A module span `M₁ ← M → M₂` over one quantale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanDoc {
    pub source: ModuleRef,
    pub left: ModuleRef,
    pub right: ModuleRef,
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<ModuleRef>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmCoproductDoc {
    pub family: Vec<ModuleRef>,
    pub r: QuantaleRef,
    pub nus: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantale_targets: Option<Vec<QuantaleRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<ModuleRef>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub module: ModuleRef,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmPushoutDoc {
    pub source: ModuleRef,
    pub left: ModuleRef,
    pub right: ModuleRef,
    pub s1: MorphismDoc,
    pub s2: MorphismDoc,
    pub r: QuantaleRef,
    pub k1: Vec<usize>,
    pub k2: Vec<usize>,
    #[serde(default)]
    pub witnesses: [Option<WitnessDoc>; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantale_targets: Option<Vec<QuantaleRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<ModuleRef>>,
}

/// A derivation together with what it derives from. Its `steps` make it a
/// plain derivation document as well.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<DeductiveSystem>,
    #[serde(default)]
    pub premises: Vec<Statement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<Statement>,
    pub steps: Vec<Step>,
}

impl ProofDoc {
    pub fn derivation(&self) -> Derivation {
        Derivation { steps: self.steps.clone() }
    }
}

/// An interpretation, or a bare translation read pointwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapDoc {
    Interpretation {
        translation: Translation,
        source_type: (usize, usize),
        templates: Vec<Statement>,
    },
    Translation(Translation),
}

impl MapDoc {
    pub fn interpretation(self, source_type: (usize, usize)) -> Result<Interpretation, CombinatorError> {
        match self {
            MapDoc::Interpretation {
                translation,
                source_type,
                templates,
            } => Interpretation::new(translation, source_type, templates),
            MapDoc::Translation(t) => Ok(Interpretation::pointwise(t, source_type)),
        }
    }
}

pub fn lattice_doc(l: &FinSupLattice) -> LatticeDoc {
    LatticeDoc {
        elements: l.names().to_vec(),
        leq: l.leq_table().to_vec(),
    }
}

pub fn quantale_doc(q: &FinQuantale) -> QuantaleDoc {
    QuantaleDoc {
        lattice: lattice_doc(q.lattice()),
        mult: q.mult_table().to_vec(),
        unit: q.unit(),
    }
}

/// A self-contained document with the scalars inline.
pub fn module_doc(m: &FinModule) -> ModuleDoc {
    ModuleDoc {
        scalars: QuantaleRef::Quantale(quantale_doc(m.scalars())),
        lattice: lattice_doc(m.lattice()),
        action: m.action_table().to_vec(),
        side: m.side(),
    }
}

pub fn nucleus_doc(n: &Nucleus) -> NucleusDoc {
    NucleusDoc {
        module: ModuleRef::Inline(Box::new(module_doc(n.module()))),
        table: n.table().to_vec(),
    }
}

pub fn read_file(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, context: &str) -> Result<T, LoadError> {
    serde_json::from_str(text).map_err(|e| input_error(format!("{context}: {e}")))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, LoadError> {
    parse_json(&read_file(path)?, &path.display().to_string())
}

/// A command-line argument naming a document: an existing file, inline
/// JSON, or else a bare string such as a catalogue name.
pub fn read_arg<T: DeserializeOwned>(arg: &str) -> Result<T, LoadError> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json(path);
    }
    if path.extension().is_some_and(|x| x == "json") {
        return Err(input_error(format!("{arg}: no such file")));
    }
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return parse_json(arg, "inline JSON");
    }
    serde_json::from_value(serde_json::Value::String(arg.to_string()))
        .map_err(|e| input_error(format!("{arg}: not a file, inline JSON or name ({e})")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), LoadError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| input_error(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Turns documents into validated structures, resolving names against a
/// catalogue.
pub struct Resolver {
    pub catalog: Catalog,
    subset_bound: usize,
    powerset_bound: usize,
}

impl Resolver {
    /// `enum_bound` caps the exhaustive subset-join check and the monoid
    /// size for powerset quantales.
    pub fn new(catalog: Catalog, enum_bound: Option<usize>) -> Self {
        Resolver {
            catalog,
            subset_bound: enum_bound.unwrap_or(FULL_SUBSET_CHECK_BOUND),
            powerset_bound: enum_bound.unwrap_or(POWERSET_MONOID_BOUND),
        }
    }

    /// The bundled catalogue plus every `*.json` in `QF_CATALOG_DIR`.
    pub fn from_env(enum_bound: Option<usize>) -> Result<Self, LoadError> {
        let mut r = Resolver::new(Catalog::builtin(), enum_bound);
        if let Some(dir) = std::env::var_os(CATALOG_DIR_VAR) {
            r.load_dir(Path::new(&dir))?;
        }
        Ok(r)
    }

    /// Adds the structures of a directory under their file stems. Files
    /// may refer to each other by name in any order.
    pub fn load_dir(&mut self, dir: &Path) -> Result<usize, LoadError> {
        let entries = std::fs::read_dir(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut pending = Vec::new();
        for path in files {
            let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            let doc: StructureDoc = read_json(&path)?;
            pending.push((name, doc));
        }
        let total = pending.len();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            let mut last_error = None;
            for (name, doc) in pending {
                match self.structure(&doc) {
                    Ok(s) => self.register(&name, s),
                    Err(LoadError::Input { message }) => {
                        last_error = Some(format!("{name}: {message}"));
                        rest.push((name, doc));
                    }
                    Err(e) => return Err(LoadError::Input { message: format!("{}: {name}: {e}", dir.display()) }),
                }
            }
            if rest.len() == before {
                return Err(input_error(last_error.unwrap_or_default()));
            }
            pending = rest;
        }
        Ok(total)
    }

    fn register(&mut self, name: &str, s: Structure) {
        let named = |v| Named { name: name.to_string(), value: v };
        match s {
            Structure::Quantale(q) => self.catalog.quantales.push(named(q)),
            Structure::Module(m) => self.catalog.modules.push(Named { name: name.to_string(), value: m }),
            Structure::Nucleus(n) => self.catalog.nuclei.push(Named { name: name.to_string(), value: n }),
            Structure::Lattice(l) => {
                let two = self.catalog.quantale("2").cloned().unwrap_or_else(|| Arc::new(FinQuantale::two()));
                self.catalog.modules.push(Named {
                    name: name.to_string(),
                    value: FinModule::over_two_with(&two, l),
                })
            }
        }
    }

    pub fn lattice(&self, doc: &LatticeDoc) -> Result<FinSupLattice, LoadError> {
        check_suplattice_with_bound(doc.elements.clone(), doc.leq.clone(), self.subset_bound).map_err(|e| invalid("lattice", e))
    }

    pub fn quantale(&self, r: &QuantaleRef) -> Result<Scalars, LoadError> {
        match r {
            QuantaleRef::Name(n) => self
                .catalog
                .quantale(n)
                .cloned()
                .ok_or_else(|| input_error(format!("unknown quantale `{n}`"))),
            QuantaleRef::Quantale(d) => {
                let l = self.lattice(&d.lattice)?;
                let q = check_quantale(l, d.mult.clone(), d.unit).map_err(|e| invalid("quantale", e))?;
                Ok(Arc::new(q))
            }
            QuantaleRef::Monoid(d) => {
                let m = check_monoid(d.elements.clone(), d.op.clone(), d.unit).map_err(|e| invalid("monoid", e))?;
                let q = powerset_quantale_with_bound(&m, self.powerset_bound).map_err(|e| invalid("powerset quantale", e))?;
                Ok(Arc::new(q))
            }
        }
    }

    pub fn module(&self, r: &ModuleRef) -> Result<FinModule, LoadError> {
        match r {
            ModuleRef::Name(n) => self
                .catalog
                .module(n)
                .cloned()
                .ok_or_else(|| input_error(format!("unknown module `{n}`"))),
            ModuleRef::Inline(d) => {
                let q = self.quantale(&d.scalars)?;
                let l = self.lattice(&d.lattice)?;
                check_module_sided(&q, l, d.action.clone(), d.side).map_err(|e| invalid("module", e))
            }
        }
    }

    pub fn nucleus(&self, d: &NucleusDoc) -> Result<Nucleus, LoadError> {
        let m = self.module(&d.module)?;
        check_nucleus(d.table.clone(), &m).map_err(|e| invalid("nucleus", e))
    }

    pub fn structure(&self, doc: &StructureDoc) -> Result<Structure, LoadError> {
        Ok(match doc {
            StructureDoc::Lattice(d) => Structure::Lattice(self.lattice(d)?),
            StructureDoc::Quantale(d) => Structure::Quantale(self.quantale(&QuantaleRef::Quantale(d.clone()))?),
            StructureDoc::Monoid(d) => Structure::Quantale(self.quantale(&QuantaleRef::Monoid(d.clone()))?),
            StructureDoc::Module(d) => Structure::Module(self.module(&ModuleRef::Inline(Box::new(d.clone())))?),
            StructureDoc::Nucleus(d) => Structure::Nucleus(self.nucleus(d)?),
        })
    }

    /// A catalogue name of any kind, quantales first, then modules, then
    /// nuclei.
    pub fn named(&self, name: &str) -> Option<Structure> {
        if let Some(q) = self.catalog.quantale(name) {
            return Some(Structure::Quantale(q.clone()));
        }
        if let Some(m) = self.catalog.module(name) {
            return Some(Structure::Module(m.clone()));
        }
        self.catalog
            .nuclei
            .iter()
            .find(|n| n.name == name)
            .map(|n| Structure::Nucleus(n.value.clone()))
    }

    /// `verify`'s argument: a file, inline JSON, or a catalogue name.
    pub fn structure_arg(&self, arg: &str) -> Result<Structure, LoadError> {
        if !Path::new(arg).is_file() && !arg.trim_start().starts_with('{') {
            return self.named(arg).ok_or_else(|| input_error(format!("`{arg}` is neither a file nor a catalogue name")));
        }
        let doc: StructureDoc = read_arg(arg)?;
        self.structure(&doc)
    }

    pub fn quantales(&self, refs: &[QuantaleRef]) -> Result<Vec<Scalars>, LoadError> {
        refs.iter().map(|r| self.quantale(r)).collect()
    }

    pub fn objects(&self, refs: &[ModuleRef]) -> Result<Vec<QMObject>, LoadError> {
        refs.iter().map(|r| Ok(QMObject::new(self.module(r)?))).collect()
    }

    pub fn pushout_square(&self, d: &QmPushoutDoc) -> Result<PushoutSquare, LoadError> {
        Ok(PushoutSquare {
            r: self.quantale(&d.r)?,
            k1: QuantaleHom { map: SupMap::new(d.k1.clone()) },
            k2: QuantaleHom { map: SupMap::new(d.k2.clone()) },
        })
    }

    pub fn witnesses(&self, d: &QmPushoutDoc) -> Result<[Option<EmbeddingWitness>; 2], LoadError> {
        let one = |w: &Option<WitnessDoc>| -> Result<Option<EmbeddingWitness>, LoadError> {
            w.as_ref()
                .map(|w| {
                    Ok(EmbeddingWitness {
                        module: self.module(&w.module)?,
                        map: ModuleHom { map: SupMap::new(w.map.clone()) },
                    })
                })
                .transpose()
        };
        Ok([one(&d.witnesses[0])?, one(&d.witnesses[1])?])
    }
}
