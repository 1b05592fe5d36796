//! Python bindings: structures and systems go in and out as JSON text, in
//! the same formats the command-line tool reads and writes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qmlogic::catalog::Catalog;
use qmlogic::combinators::{interpret_proof as replay, logical_coproduct, Interpretation};
use qmlogic::constructions::{module_product, tensor_product};
use qmlogic::io::{self, MapDoc, ModuleRef, ProofDoc, QuantaleRef, Resolver, Structure, StructureDoc};
use qmlogic::logic::{self, check_derivation_of, parse_statement, Budget, DeductiveSystem, Derivation, Statement};
use qmlogic::module::{FinModule, Side};
use qmlogic::quantale::Scalars;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn resolver() -> PyResult<Resolver> {
    Resolver::from_env(None).map_err(err)
}

#[pyclass(name = "Quantale", frozen)]
struct PyQuantale(Scalars);

#[pymethods]
impl PyQuantale {
    /// A catalogue name, or a quantale or monoid document.
    #[staticmethod]
    fn load(spec: &str) -> PyResult<Self> {
        let r = resolver()?;
        let q: QuantaleRef = io::read_arg(spec).map_err(err)?;
        Ok(PyQuantale(r.quantale(&q).map_err(err)?))
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn unit(&self) -> usize {
        self.0.unit()
    }

    fn names(&self) -> Vec<String> {
        self.0.lattice().names().to_vec()
    }

    fn mult(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.0.mult(a, b))
    }

    fn join(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.0.lattice().join(a, b))
    }

    fn is_commutative(&self) -> bool {
        self.0.is_commutative()
    }

    fn to_json(&self) -> String {
        json(&io::quantale_doc(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Quantale(size={})", self.0.len())
    }
}

impl PyQuantale {
    fn check(&self, a: usize) -> PyResult<()> {
        if a < self.0.len() {
            Ok(())
        } else {
            Err(err(format!("element {a} out of range")))
        }
    }
}

#[pyclass(name = "Module", frozen)]
struct PyModule_(FinModule);

#[pymethods]
impl PyModule_ {
    #[staticmethod]
    fn load(spec: &str) -> PyResult<Self> {
        let r = resolver()?;
        let m: ModuleRef = io::read_arg(spec).map_err(err)?;
        Ok(PyModule_(r.module(&m).map_err(err)?))
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn side(&self) -> &'static str {
        match self.0.side() {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    fn scalars(&self) -> PyQuantale {
        PyQuantale(self.0.scalars().clone())
    }

    fn act(&self, a: usize, x: usize) -> PyResult<usize> {
        if a >= self.0.scalars().len() || x >= self.0.len() {
            return Err(err("index out of range"));
        }
        Ok(self.0.act(a, x))
    }

    fn join(&self, x: usize, y: usize) -> PyResult<usize> {
        if x >= self.0.len() || y >= self.0.len() {
            return Err(err("index out of range"));
        }
        Ok(self.0.join(x, y))
    }

    fn leq(&self, x: usize, y: usize) -> PyResult<bool> {
        if x >= self.0.len() || y >= self.0.len() {
            return Err(err("index out of range"));
        }
        Ok(self.0.leq(x, y))
    }

    /// `self ⊗ other`, with `self` read as a right module and `other` as a
    /// left one (sides are switched over commutative scalars).
    fn tensor(&self, other: &PyModule_) -> PyResult<PyModule_> {
        let m1 = if self.0.side() == Side::Right { self.0.clone() } else { self.0.with_side(Side::Right).map_err(err)? };
        let m2 = if other.0.side() == Side::Left { other.0.clone() } else { other.0.with_side(Side::Left).map_err(err)? };
        Ok(PyModule_(tensor_product(&m1, &m2).map_err(err)?.module))
    }

    fn product(&self, others: Vec<PyRef<'_, PyModule_>>) -> PyResult<PyModule_> {
        let mut family = vec![self.0.clone()];
        family.extend(others.iter().map(|m| m.0.clone()));
        Ok(PyModule_(module_product(&family).map_err(err)?.module))
    }

    fn to_json(&self) -> String {
        json(&io::module_doc(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Module(size={}, side={})", self.0.len(), self.side())
    }
}

/// Validates a lattice, quantale, monoid, module or nucleus (document or
/// catalogue name). Returns `(ok, kind or error message)`.
#[pyfunction]
fn verify(spec: &str) -> PyResult<(bool, String)> {
    let r = resolver()?;
    match r.structure_arg(spec) {
        Ok(s) => Ok((true, s.kind().to_string())),
        Err(io::LoadError::Invalid { what, message, .. }) => Ok((false, format!("{what}: {message}"))),
        Err(e) => Err(err(e)),
    }
}

/// Names of the bundled quantales, modules and nuclei.
#[pyfunction]
fn catalog_names() -> (Vec<String>, Vec<String>, Vec<String>) {
    let c = Catalog::builtin();
    (
        c.quantales.iter().map(|n| n.name.clone()).collect(),
        c.modules.iter().map(|n| n.name.clone()).collect(),
        c.nuclei.iter().map(|n| n.name.clone()).collect(),
    )
}

#[pyclass(name = "System", frozen)]
struct PySystem(DeductiveSystem);

#[pymethods]
impl PySystem {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySystem(serde_json::from_str(text).map_err(err)?))
    }

    /// Classical logic over `imp` and `not`, three axioms and modus ponens.
    #[staticmethod]
    fn cpl() -> Self {
        PySystem(logic::cpl::lukasiewicz())
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    fn connectives(&self) -> Vec<(String, usize)> {
        self.0.language().connectives().iter().map(|c| (c.name.clone(), c.arity)).collect()
    }

    fn to_json(&self) -> String {
        json(&self.0)
    }

    /// Bounded search. Returns the search report as JSON.
    #[pyo3(signature = (goal, premises = Vec::new(), depth = 5, size = None, nodes = None))]
    fn derive(&self, goal: &str, premises: Vec<String>, depth: usize, size: Option<usize>, nodes: Option<u64>) -> PyResult<String> {
        let goal = parse_statement(goal, self.0.language()).map_err(err)?;
        let premises = self.statements(&premises)?;
        let mut b = Budget::depth(depth);
        if let Some(s) = size {
            b = b.with_size(s);
        }
        if let Some(n) = nodes {
            b.nodes = n;
        }
        Ok(json(&logic::derive(&self.0, &premises, &goal, b).map_err(err)?))
    }

    /// Checks a derivation document against premises and a goal.
    #[pyo3(signature = (derivation, goal, premises = Vec::new()))]
    fn check(&self, derivation: &str, goal: &str, premises: Vec<String>) -> PyResult<bool> {
        let d: Derivation = serde_json::from_str(derivation).map_err(err)?;
        let goal = parse_statement(goal, self.0.language()).map_err(err)?;
        let premises = self.statements(&premises)?;
        Ok(check_derivation_of(&self.0, &premises, &goal, &d).is_ok())
    }

    fn __repr__(&self) -> String {
        format!("System({:?})", self.0.name)
    }
}

impl PySystem {
    fn statements(&self, texts: &[String]) -> PyResult<Vec<Statement>> {
        texts.iter().map(|t| parse_statement(t, self.0.language()).map_err(err)).collect()
    }
}

/// The coproduct of systems, connectives of factor `i` tagged `#i`.
#[pyfunction]
fn coproduct(systems: Vec<PyRef<'_, PySystem>>) -> PyResult<PySystem> {
    let factors: Vec<DeductiveSystem> = systems.iter().map(|s| s.0.clone()).collect();
    Ok(PySystem(logical_coproduct(&factors).map_err(err)?.system))
}

/// Replays a proof document through an interpretation or translation
/// document; returns the target proof document as JSON.
#[pyfunction]
#[pyo3(signature = (proof, source, target, map, depth = 4))]
fn interpret_proof(proof: &str, source: &PySystem, target: &PySystem, map: &str, depth: usize) -> PyResult<String> {
    let doc: ProofDoc = serde_json::from_str(proof).map_err(err)?;
    let map: MapDoc = serde_json::from_str(map).map_err(err)?;
    let iota: Interpretation = map.interpretation(source.0.statement_type()).map_err(err)?;
    let out = replay(&doc.derivation(), &source.0, &doc.premises, &target.0, &iota, Budget::depth(depth)).map_err(err)?;
    Ok(json(&ProofDoc {
        system: Some(target.0.clone()),
        premises: iota.image_set(&doc.premises),
        goal: out.conclusion().cloned(),
        steps: out.steps,
    }))
}

/// Kind and size of a structure document, without validating names
/// against anything but the bundled catalogue.
#[pyfunction]
fn describe(text: &str) -> PyResult<(String, usize)> {
    let doc: StructureDoc = serde_json::from_str(text).map_err(err)?;
    let s: Structure = resolver()?.structure(&doc).map_err(err)?;
    Ok((s.kind().to_string(), s.size()))
}

#[pymodule]
fn qmlogic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuantale>()?;
    m.add_class::<PyModule_>()?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(coproduct, m)?)?;
    m.add_function(wrap_pyfunction!(interpret_proof, m)?)?;
    m.add_function(wrap_pyfunction!(describe, m)?)?;
    Ok(())
}
