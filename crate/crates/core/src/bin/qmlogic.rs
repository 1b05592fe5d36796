use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use qmlogic::combinators::{amalgamated_system, check_action_invariance, check_translation_conditions, interpret_proof};
use qmlogic::combinators::{logical_coproduct, CombinatorError, FragmentCheck, SuiteEntry};
use qmlogic::constructions::qm::{qm_coproduct, qm_pushout, QMObject};
use qmlogic::constructions::{module_product, module_pushout, tensor_product, ConstructionError, UniversalCheck};
use qmlogic::io::{self, LoadError, MapDoc, ModuleRef, MorphismDoc, ProofDoc, QmCoproductDoc, QmPushoutDoc, Resolver, SpanDoc, Structure};
use qmlogic::logic::{check_derivation, check_derivation_of, derive, parse_statement, random, BoundedNucleus, Budget};
use qmlogic::logic::{DeductiveSystem, LogicError, SearchStatus, Statement, Substitution};
use qmlogic::module::{check_module_hom, check_module_sided, image_module, FinModule, ModuleHom, Side};
use qmlogic::oracle::{tensor_by_congruence, TENSOR_ORACLE_BOUND};
use qmlogic::order::SupMap;
use qmlogic::quantale::{QuantaleHom, Scalars};
use qmlogic::search::lattice_isomorphism;
use qmlogic::suite;

/// Finite quantales, quantale modules and propositional deductive systems.
///
/// Every command prints a JSON report to stdout. Exit status: 0 when all
/// checks pass, 1 when one fails (the report holds a witness), 2 when a
/// budget ran out, 3 on bad input.
#[derive(Parser)]
#[command(name = "qmlogic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Largest proof-tree height for searches.
    #[arg(long, global = true, visible_alias = "depth")]
    budget_depth: Option<usize>,
    /// Largest formula size in a proof.
    #[arg(long, global = true)]
    budget_size: Option<usize>,
    /// Search nodes before a search gives up.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Carrier size up to which subset joins are checked exhaustively, and
    /// largest monoid taken to its powerset quantale.
    #[arg(long, global = true)]
    enum_bound: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = suite::DEFAULT_SEED)]
    seed: u64,
    /// Where to write the produced structure, system or derivation (the
    /// report itself for commands that produce nothing else).
    #[arg(long, short = 'o', global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a lattice, quantale, monoid, module or nucleus (file, inline
    /// JSON or catalogue name).
    Verify { structure: String },
    /// `M₁ ⊗_Q M₂` of a right and a left module.
    Tensor { left: String, right: String },
    /// Product (and coproduct) of modules over one quantale.
    Product {
        #[arg(required = true)]
        modules: Vec<String>,
    },
    /// Pushout of a module span `{"source","left","right","f1","f2"}`.
    Pushout { span: String },
    /// Coproduct of quantale-module pairs over a supplied quantale coproduct.
    QmCoproduct {
        file: Option<String>,
        /// A bundled instance, by name or 1-based position.
        #[arg(long)]
        instance: Option<String>,
    },
    /// Pushout of quantale-module pairs over a supplied quantale pushout.
    QmPushout {
        file: Option<String>,
        #[arg(long)]
        instance: Option<String>,
    },
    /// Bounded search for a derivation.
    Derive {
        #[arg(long)]
        system: String,
        /// A premise; repeat, or separate with `;`.
        #[arg(long = "from")]
        from: Vec<String>,
        #[arg(long)]
        goal: String,
    },
    /// Check a module nucleus, or close premises under a bounded
    /// consequence relation.
    Nucleus {
        nucleus: Option<String>,
        #[arg(long)]
        system: Option<String>,
        #[arg(long = "from")]
        from: Vec<String>,
        #[arg(long, default_value_t = 3)]
        universe_depth: usize,
        #[arg(long, default_value_t = 1)]
        vars: u32,
        /// Substitutions sampled for the structurality check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Coproduct of deductive systems over retagged languages.
    Coproduct {
        #[arg(long, num_args = 1.., required = true)]
        systems: Vec<String>,
    },
    /// Glue two systems along a shared fragment.
    Amalgamate {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        fragment: String,
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
        #[arg(long)]
        gens: String,
        /// Fragment entailments both maps must preserve and reflect.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Replay a derivation through an interpretation.
    InterpretProof {
        #[arg(long)]
        proof: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        map: String,
        /// The source system, when the proof file does not carry it.
        #[arg(long)]
        source: Option<String>,
    },
    /// Run the bundled acceptance criteria.
    Suite {
        /// Only these criteria, e.g. `1,8`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Tensor { .. } => "tensor",
            Command::Product { .. } => "product",
            Command::Pushout { .. } => "pushout",
            Command::QmCoproduct { .. } => "qm-coproduct",
            Command::QmPushout { .. } => "qm-pushout",
            Command::Derive { .. } => "derive",
            Command::Nucleus { .. } => "nucleus",
            Command::Coproduct { .. } => "coproduct",
            Command::Amalgamate { .. } => "amalgamate",
            Command::InterpretProof { .. } => "interpret-proof",
            Command::Suite { .. } => "suite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Skipped,
    Pass,
    Inconclusive,
    Fail,
    InputError,
}

impl Status {
    fn exit_code(self) -> u8 {
        match self {
            Status::Skipped | Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::InputError => 3,
        }
    }
}

#[derive(Serialize)]
struct Check {
    name: String,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    status: Status,
    parameters: Value,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Report {
    fn new(command: &'static str, parameters: Value) -> Self {
        Report {
            command,
            status: Status::Pass,
            parameters,
            checks: Vec::new(),
            witness: None,
            result: Value::Null,
            error: None,
        }
    }

    fn check(&mut self, name: impl Into<String>, status: Status, detail: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            detail,
        });
    }

    fn require(&mut self, name: impl Into<String>, ok: bool, detail: Option<String>) {
        self.check(name, if ok { Status::Pass } else { Status::Fail }, detail);
    }

    /// The first failing witness wins.
    fn witness(&mut self, w: Value) {
        self.witness.get_or_insert(w);
    }

    fn abort(&mut self, status: Status, error: impl Into<String>, witness: Option<Value>) {
        self.check("inputs", status, None);
        self.error = Some(error.into());
        if let Some(w) = witness {
            self.witness(w);
        }
    }

    fn finish(mut self) -> Self {
        self.status = self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass).max(Status::Pass);
        self
    }
}

/// What a command hands back: the report, and optionally an artifact for
/// `--out`.
type Outcome = (Report, Option<Value>);

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn load_failure(report: &mut Report, e: LoadError) {
    match e {
        LoadError::Input { message } => report.abort(Status::InputError, message, None),
        LoadError::Invalid { what, message, witness } => report.abort(
            Status::InputError,
            format!("{what}: {message}"),
            Some(json!({ "structure": what, "error": witness })),
        ),
    }
}

fn construction_failure(report: &mut Report, e: ConstructionError) {
    let status = match &e {
        ConstructionError::SizeBound { .. } => Status::Inconclusive,
        ConstructionError::NotACoproductWitness { .. }
        | ConstructionError::NotAPushoutWitness { .. }
        | ConstructionError::MissingEmbeddingWitness { .. }
        | ConstructionError::WitnessNotInjective { .. } => Status::Fail,
        _ => Status::InputError,
    };
    report.abort(status, e.to_string(), Some(to_value(&e)));
}

fn combinator_failure(report: &mut Report, e: CombinatorError) {
    let status = match &e {
        CombinatorError::Logic(LogicError::BudgetExceeded { .. }) => Status::Inconclusive,
        CombinatorError::NonConservativeWitness { .. }
        | CombinatorError::StepNotInterpretable { .. }
        | CombinatorError::ActionInvarianceViolation { .. } => Status::Fail,
        CombinatorError::FragmentMismatch { reason } if reason.contains("fails on the suite") => Status::Fail,
        _ => Status::InputError,
    };
    report.abort(status, e.to_string(), Some(to_value(&e)));
}

macro_rules! attempt {
    ($report:expr, $e:expr, $fail:ident) => {
        match $e {
            Ok(v) => v,
            Err(e) => {
                $fail(&mut $report, e.into());
                return ($report.finish(), None);
            }
        }
    };
}

fn logic_failure(report: &mut Report, e: LogicError) {
    let status = match e {
        LogicError::BudgetExceeded { .. } => Status::Inconclusive,
        _ => Status::InputError,
    };
    report.abort(status, e.to_string(), Some(to_value(&e)));
}

fn budget(common: &Common, default_depth: usize) -> Result<Budget, LoadError> {
    let mut b = Budget::depth(common.budget_depth.unwrap_or(default_depth));
    if let Some(s) = common.budget_size {
        b = b.with_size(s);
    }
    if let Some(n) = common.budget_nodes {
        b.nodes = n;
    }
    if b.depth == 0 || b.size == Some(0) || b.nodes == 0 {
        return Err(io::input_error("budgets must be positive"));
    }
    Ok(b)
}

fn parameters(common: &Common, budget: Option<Budget>) -> Value {
    let mut p = json!({ "seed": common.seed });
    if let Some(b) = budget {
        p["budget"] = to_value(&b);
    }
    if let Some(e) = common.enum_bound {
        p["enum_bound"] = json!(e);
    }
    p
}

fn universal(report: &mut Report, what: &str, checks: &[UniversalCheck]) {
    let cones: usize = checks.iter().map(|c| c.cones).sum();
    let bad: Vec<&UniversalCheck> = checks.iter().filter(|c| !c.holds()).collect();
    report.require(
        what,
        bad.is_empty(),
        Some(format!("{} targets, {cones} cones, {} targets failing", checks.len(), bad.len())),
    );
    if let Some(b) = bad.first() {
        report.witness(json!({ "property": what, "check": to_value(b) }));
    }
}

/// Catalogue modules over `q` small enough to enumerate maps into.
fn small_targets(resolver: &Resolver, q: &Scalars, side: Side) -> Vec<FinModule> {
    resolver
        .catalog
        .modules
        .iter()
        .filter(|m| m.value.len() <= 4 && m.value.side() == side && (m.value.scalars() == q))
        .map(|m| m.value.clone())
        .collect()
}

fn verify(resolver: &Resolver, arg: &str, mut report: Report) -> Outcome {
    let s = match resolver.structure_arg(arg) {
        Ok(s) => s,
        Err(LoadError::Invalid { what, message, witness }) => {
            report.check(format!("{what} axioms"), Status::Fail, Some(message));
            report.witness(json!({ "structure": what, "error": witness }));
            return (report.finish(), None);
        }
        Err(e) => {
            load_failure(&mut report, e);
            return (report.finish(), None);
        }
    };
    report.check(format!("{} axioms", s.kind()), Status::Pass, None);
    let document = match &s {
        Structure::Lattice(l) => to_value(&io::lattice_doc(l)),
        Structure::Quantale(q) => to_value(&io::quantale_doc(q)),
        Structure::Module(m) => to_value(&io::module_doc(m)),
        Structure::Nucleus(n) => {
            let image = image_module(n);
            let ok = check_module_hom(image.surjection.map.table.clone(), n.module(), &image.module).is_ok();
            report.require("corestriction onto the closed system is a module map", ok, None);
            to_value(&io::nucleus_doc(n))
        }
    };
    report.result = json!({ "kind": s.kind(), "size": s.size(), "document": document });
    (report.finish(), None)
}

fn sided(m: FinModule, side: Side, which: &str) -> Result<FinModule, LoadError> {
    if m.side() == side {
        return Ok(m);
    }
    m.with_side(side)
        .map_err(|e| io::input_error(format!("{which} module must act on the {side:?} side: {e}").to_lowercase()))
}

fn tensor(resolver: &Resolver, left: &str, right: &str, mut report: Report) -> Outcome {
    let m1 = attempt!(report, io::read_arg::<ModuleRef>(left).and_then(|r| resolver.module(&r)), load_failure);
    let m2 = attempt!(report, io::read_arg::<ModuleRef>(right).and_then(|r| resolver.module(&r)), load_failure);
    let m1 = attempt!(report, sided(m1, Side::Right, "left"), load_failure);
    let m2 = attempt!(report, sided(m2, Side::Left, "right"), load_failure);
    let t = attempt!(report, tensor_product(&m1, &m2), construction_failure);
    let m = &t.module;
    let again = check_module_sided(m.scalars(), m.lattice().clone(), m.action_table().to_vec(), m.side());
    report.require("tensor is a sup-lattice", again.is_ok(), None);
    if m1.len() * m2.len() <= TENSOR_ORACLE_BOUND {
        let same = tensor_by_congruence(&m1, &m2)
            .is_some_and(|o| o.tops == t.masks && lattice_isomorphism(&o.lattice, m.lattice()).is_isomorphic());
        report.require("congruence-closure oracle agrees", same, None);
    } else {
        report.check(
            "congruence-closure oracle agrees",
            Status::Skipped,
            Some(format!("{} pairs exceed the oracle bound {TENSOR_ORACLE_BOUND}", m1.len() * m2.len())),
        );
    }
    let doc = to_value(&io::module_doc(m));
    report.result = json!({ "size": m.len(), "pure": t.pure, "module": doc });
    (report.finish(), Some(doc))
}

fn product(resolver: &Resolver, args: &[String], mut report: Report) -> Outcome {
    let mut family = Vec::new();
    for a in args {
        family.push(attempt!(report, io::read_arg::<ModuleRef>(a).and_then(|r| resolver.module(&r)), load_failure));
    }
    let p = attempt!(report, module_product(&family), construction_failure);
    if p.module.len() <= 64 {
        let mut targets = small_targets(resolver, family[0].scalars(), family[0].side());
        targets.extend(family.iter().filter(|m| m.len() <= 4).cloned());
        universal(&mut report, "coproduct property", &p.check_coproduct(&family, &targets));
        universal(&mut report, "product property", &p.check_product(&family, &targets));
    } else {
        report.check("universal properties", Status::Skipped, Some(format!("product of size {}", p.module.len())));
    }
    let doc = to_value(&io::module_doc(&p.module));
    let tables = |hs: &[ModuleHom]| hs.iter().map(|h| h.map.table.clone()).collect::<Vec<_>>();
    report.result = json!({
        "size": p.module.len(),
        "projections": tables(&p.projections),
        "injections": tables(&p.injections),
        "module": doc,
    });
    (report.finish(), Some(doc))
}

fn pushout(resolver: &Resolver, arg: &str, mut report: Report) -> Outcome {
    let span: SpanDoc = attempt!(report, io::read_arg(arg), load_failure);
    let m = attempt!(report, resolver.module(&span.source), load_failure);
    let m1 = attempt!(report, resolver.module(&span.left), load_failure);
    let m2 = attempt!(report, resolver.module(&span.right), load_failure);
    let f1 = ModuleHom { map: SupMap::new(span.f1.clone()) };
    let f2 = ModuleHom { map: SupMap::new(span.f2.clone()) };
    let p = attempt!(report, module_pushout(&m, &m1, &m2, &f1, &f2), construction_failure);
    let mut targets = match &span.targets {
        Some(t) => attempt!(report, t.iter().map(|r| resolver.module(r)).collect::<Result<Vec<_>, _>>(), load_failure),
        None => small_targets(resolver, m.scalars(), m.side()),
    };
    targets.push(m1.clone());
    targets.push(m2.clone());
    universal(&mut report, "pushout property", &p.check_universal(&m1, &m2, &f1, &f2, &targets));
    let doc = to_value(&io::module_doc(&p.module));
    report.result = json!({
        "size": p.module.len(),
        "legs": [p.legs[0].map.table.clone(), p.legs[1].map.table.clone()],
        "saturated": p.saturation.saturated,
        "module": doc,
    });
    (report.finish(), Some(doc))
}

fn pick<'a, T>(items: &'a [T], name: &str, names: impl Fn(&T) -> &str) -> Result<&'a T, LoadError> {
    if let Ok(i) = name.parse::<usize>() {
        if (1..=items.len()).contains(&i) {
            return Ok(&items[i - 1]);
        }
    }
    items.iter().find(|x| names(x) == name).ok_or_else(|| {
        let known: Vec<&str> = items.iter().map(&names).collect();
        io::input_error(format!("no bundled instance `{name}`; known: {known:?}"))
    })
}

fn qm_targets(resolver: &Resolver, q: &Option<Vec<io::QuantaleRef>>, m: &Option<Vec<ModuleRef>>) -> Result<(Vec<Scalars>, Vec<QMObject>), LoadError> {
    let qs = match q {
        Some(q) => resolver.quantales(q)?,
        None => resolver.catalog.quantale_targets(),
    };
    let ms = match m {
        Some(m) => resolver.objects(m)?,
        None => resolver.catalog.qm_targets(),
    };
    Ok((qs, ms))
}

fn qm_coproduct_cmd(resolver: &Resolver, file: Option<&str>, instance: Option<&str>, mut report: Report) -> Outcome {
    let (family, r, nus, qtargets, targets) = match (file, instance) {
        (Some(f), None) => {
            let doc: QmCoproductDoc = attempt!(report, io::read_arg(f), load_failure);
            let family = attempt!(report, resolver.objects(&doc.family), load_failure);
            let r = attempt!(report, resolver.quantale(&doc.r), load_failure);
            let nus = doc.nus.iter().map(|t| QuantaleHom { map: SupMap::new(t.clone()) }).collect();
            let (qt, t) = attempt!(report, qm_targets(resolver, &doc.quantale_targets, &doc.targets), load_failure);
            (family, r, nus, qt, t)
        }
        (None, Some(name)) => {
            let all = resolver.catalog.coproduct_instances();
            let inst = attempt!(report, pick(&all, name, |i| &i.name), load_failure).clone();
            report.parameters["instance"] = json!(inst.name);
            (inst.family, inst.r, inst.nus, resolver.catalog.quantale_targets(), resolver.catalog.qm_targets())
        }
        _ => {
            load_failure(&mut report, io::input_error("give an instance file or --instance, not both"));
            return (report.finish(), None);
        }
    };
    let cp = attempt!(report, qm_coproduct(&family, &r, &nus, &qtargets), construction_failure);
    report.require(
        "quantale coproduct witness",
        cp.quantale_checks.iter().all(UniversalCheck::holds),
        Some(format!("{} quantale targets", cp.quantale_checks.len())),
    );
    universal(&mut report, "coproduct property", &cp.check_universal(&family, &targets));
    let doc = to_value(&io::module_doc(&cp.object.m));
    report.result = json!({
        "size": cp.object.m.len(),
        "injections": cp.injections.iter().map(MorphismDoc::from_morphism).collect::<Vec<_>>(),
        "module": doc,
    });
    (report.finish(), Some(doc))
}

fn qm_pushout_cmd(resolver: &Resolver, file: Option<&str>, instance: Option<&str>, mut report: Report) -> Outcome {
    let (source, left, right, s1, s2, square, witnesses, qtargets, targets) = match (file, instance) {
        (Some(f), None) => {
            let doc: QmPushoutDoc = attempt!(report, io::read_arg(f), load_failure);
            let source = QMObject::new(attempt!(report, resolver.module(&doc.source), load_failure));
            let left = QMObject::new(attempt!(report, resolver.module(&doc.left), load_failure));
            let right = QMObject::new(attempt!(report, resolver.module(&doc.right), load_failure));
            let square = attempt!(report, resolver.pushout_square(&doc), load_failure);
            let witnesses = attempt!(report, resolver.witnesses(&doc), load_failure);
            let (qt, t) = attempt!(report, qm_targets(resolver, &doc.quantale_targets, &doc.targets), load_failure);
            (source, left, right, doc.s1.to_morphism(), doc.s2.to_morphism(), square, witnesses, qt, t)
        }
        (None, Some(name)) => {
            let all = resolver.catalog.pushout_instances();
            let inst = attempt!(report, pick(&all, name, |i| &i.name), load_failure).clone();
            report.parameters["instance"] = json!(inst.name);
            let [w1, w2] = inst.witnesses;
            (
                inst.source,
                inst.left,
                inst.right,
                inst.s1,
                inst.s2,
                inst.square,
                [Some(w1), Some(w2)],
                resolver.catalog.quantale_targets(),
                resolver.catalog.qm_targets(),
            )
        }
        _ => {
            load_failure(&mut report, io::input_error("give an instance file or --instance, not both"));
            return (report.finish(), None);
        }
    };
    let w = [witnesses[0].as_ref(), witnesses[1].as_ref()];
    let p = attempt!(report, qm_pushout(&source, &left, &right, &s1, &s2, &square, w, &qtargets), construction_failure);
    report.require(
        "quantale pushout witness",
        p.quantale_checks.iter().all(UniversalCheck::holds),
        Some(format!("{} quantale targets", p.quantale_checks.len())),
    );
    let mut all_targets = targets;
    all_targets.push(left.clone());
    all_targets.push(right.clone());
    universal(&mut report, "pushout property", &p.check_universal(&left, &right, &s1, &s2, &all_targets));
    match p.amalgam {
        Some(ok) => {
            report.require("legs injective for injective inputs", ok, None);
            if !ok {
                report.witness(json!({ "legs": p.legs.iter().map(MorphismDoc::from_morphism).collect::<Vec<_>>() }));
            }
        }
        None => report.check("legs injective for injective inputs", Status::Skipped, Some("an input map is not injective".into())),
    }
    let doc = to_value(&io::module_doc(&p.object.m));
    report.result = json!({
        "size": p.object.m.len(),
        "legs": p.legs.iter().map(MorphismDoc::from_morphism).collect::<Vec<_>>(),
        "amalgam": p.amalgam,
        "module": doc,
    });
    (report.finish(), Some(doc))
}

fn statements(texts: &[String], system: &DeductiveSystem) -> Result<Vec<Statement>, LoadError> {
    texts
        .iter()
        .flat_map(|t| t.split(';'))
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_statement(t, system.language()).map_err(|e| io::input_error(format!("`{t}`: {e}"))))
        .collect()
}

fn load_system(arg: &str) -> Result<DeductiveSystem, LoadError> {
    io::read_arg(arg)
}

fn derive_cmd(common: &Common, system: &str, from: &[String], goal: &str, mut report: Report) -> Outcome {
    let b = attempt!(report, budget(common, 5), load_failure);
    report.parameters = parameters(common, Some(b));
    let s = attempt!(report, load_system(system), load_failure);
    let premises = attempt!(report, statements(from, &s), load_failure);
    let goal = attempt!(report, statements(&[goal.to_string()], &s), load_failure);
    let [goal] = goal.as_slice() else {
        load_failure(&mut report, io::input_error("exactly one goal"));
        return (report.finish(), None);
    };
    let r = attempt!(report, derive(&s, &premises, goal, b), logic_failure);
    let exhaustive = r.status == SearchStatus::NotFoundWithinBudget;
    let mut artifact = None;
    match &r.derivation {
        Some(d) => {
            report.check("derivation found", Status::Pass, Some(format!("{} steps, height {}", d.len(), d.height())));
            let checked = check_derivation_of(&s, &premises, goal, d);
            if let Err(e) = &checked {
                report.witness(json!({ "checker": e.to_string() }));
            }
            report.require("independent checker accepts it", checked.is_ok(), None);
            artifact = Some(to_value(&ProofDoc {
                system: Some(s.clone()),
                premises: premises.clone(),
                goal: Some(goal.clone()),
                steps: d.steps.clone(),
            }));
        }
        None => report.check(
            "derivation found",
            Status::Inconclusive,
            Some(if exhaustive {
                "bounded search space exhausted without a derivation".into()
            } else {
                "node budget ran out".into()
            }),
        ),
    }
    report.result = json!({
        "status": r.status,
        "exhaustive": exhaustive,
        "nodes": r.nodes,
        "height": r.height,
        "steps": r.derivation.as_ref().map(|d| d.len()),
        "derivation": r.derivation,
    });
    (report.finish(), artifact)
}

fn module_nucleus(resolver: &Resolver, arg: &str, mut report: Report) -> Outcome {
    let n = match resolver.structure_arg(arg) {
        Ok(Structure::Nucleus(n)) => n,
        Ok(s) => {
            load_failure(&mut report, io::input_error(format!("expected a nucleus, got a {}", s.kind())));
            return (report.finish(), None);
        }
        Err(LoadError::Invalid { what, message, witness }) => {
            report.check(format!("{what} axioms"), Status::Fail, Some(message));
            report.witness(json!({ "structure": what, "error": witness }));
            return (report.finish(), None);
        }
        Err(e) => {
            load_failure(&mut report, e);
            return (report.finish(), None);
        }
    };
    report.check("nucleus axioms", Status::Pass, None);
    let image = image_module(&n);
    let m = &image.module;
    let again = check_module_sided(m.scalars(), m.lattice().clone(), m.action_table().to_vec(), m.side());
    report.require("closed system is a module", again.is_ok(), None);
    let onto = check_module_hom(image.surjection.map.table.clone(), n.module(), m).is_ok() && image.surjection.map.is_surjective(m.len());
    report.require("corestriction is a surjective module map", onto, None);
    let doc = to_value(&io::module_doc(m));
    report.result = json!({ "fixed_points": image.fixed, "surjection": image.surjection.map.table, "closed_system": doc });
    (report.finish(), Some(doc))
}

fn names(g: &BoundedNucleus, ids: &BTreeSet<usize>) -> Vec<String> {
    ids.iter().map(|&i| g.universe().get(i).to_string()).collect()
}

#[allow(clippy::too_many_arguments)]
fn logic_nucleus(common: &Common, system: &str, from: &[String], depth: usize, vars: u32, samples: usize, mut report: Report) -> Outcome {
    let b = attempt!(report, budget(common, 3), load_failure);
    report.parameters = parameters(common, Some(b));
    report.parameters["universe"] = json!({ "depth": depth, "vars": vars });
    let s = attempt!(report, load_system(system), load_failure);
    let premises = attempt!(report, statements(from, &s), load_failure);
    let g = attempt!(report, BoundedNucleus::new(&s, depth, vars, b), logic_failure);
    let u = g.universe();
    let mut phi = BTreeSet::new();
    for p in &premises {
        match u.index_of(p) {
            Some(i) => {
                phi.insert(i);
            }
            None => {
                load_failure(&mut report, io::input_error(format!("{p} is outside the universe")));
                return (report.finish(), None);
            }
        }
    }
    let closed = attempt!(report, g.close(&phi), logic_failure);
    report.require("extensive", phi.is_subset(&closed), None);
    let again = attempt!(report, g.close(&closed), logic_failure);
    report.require("idempotent", again == closed, None);
    let mut monotone = true;
    for &x in &phi {
        let mut smaller = phi.clone();
        smaller.remove(&x);
        let c = attempt!(report, g.close(&smaller), logic_failure);
        if !c.is_subset(&closed) {
            monotone = false;
            report.witness(json!({ "law": "monotone", "smaller": names(&g, &smaller), "larger": names(&g, &phi) }));
        }
    }
    report.require("monotone on the premises with one removed", monotone, None);
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let (mut sampled, mut draws, mut violations) = (0, 0, 0);
    while sampled < samples && draws < 100 * samples.max(1) {
        draws += 1;
        let d = rng.gen_range(0..=2);
        let sigma = random::substitution(&mut rng, s.language(), d, vars);
        if sigma.is_identity() {
            continue;
        }
        if let Some(ok) = attempt!(report, g.structural_at(&sigma, &phi), logic_failure) {
            sampled += 1;
            if !ok {
                violations += 1;
                report.witness(json!({ "law": "structural", "sigma": sigma.to_string(), "phi": names(&g, &phi) }));
            }
        }
    }
    report.require(
        "structural on sampled substitutions",
        violations == 0,
        Some(format!("{sampled} substitutions keeping the premises in the universe, {violations} violations")),
    );
    report.result = json!({ "universe": u.len(), "closure": names(&g, &closed) });
    (report.finish(), None)
}

fn coproduct_cmd(common: &Common, systems: &[String], mut report: Report) -> Outcome {
    let mut factors = Vec::new();
    for a in systems {
        factors.push(attempt!(report, load_system(a), load_failure));
    }
    let c = attempt!(report, logical_coproduct(&factors), combinator_failure);
    let text = serde_json::to_string(&c.system).expect("serializable");
    let back: Result<DeductiveSystem, _> = serde_json::from_str(&text);
    report.require("joint system reloads", back.as_ref().ok() == Some(&c.system), None);
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    for (k, (f, e)) in factors.iter().zip(&c.injections).enumerate() {
        let sigmas: Vec<Substitution> = (0..10).map(|_| random::substitution(&mut rng, f.language(), 2, 2)).collect();
        let tr = check_translation_conditions(&e.translation, &sigmas);
        if let Some(v) = tr.violations.first() {
            report.witness(to_value(v));
        }
        report.require(format!("injection {} satisfies the translation conditions", k + 1), tr.passed(), None);
        let mut invariant = true;
        for sigma in &sigmas {
            let phi = match f.statement_type() {
                (0, 1) => Statement::formula(random::formula(&mut rng, f.language(), 2, 2)),
                _ => continue,
            };
            if let Err(err) = check_action_invariance(e, sigma, &phi) {
                invariant = false;
                report.witness(to_value(&err));
            }
        }
        report.require(format!("injection {} commutes with substitution", k + 1), invariant, None);
    }
    let system = to_value(&c.system);
    report.result = json!({ "system": system, "injections": c.injections });
    (report.finish(), Some(system))
}

#[allow(clippy::too_many_arguments)]
fn amalgamate_cmd(common: &Common, left: &str, right: &str, fragment: &str, r1: &str, r2: &str, gens: &str, suite_arg: Option<&str>, mut report: Report) -> Outcome {
    let b = attempt!(report, budget(common, 4), load_failure);
    report.parameters = parameters(common, Some(b));
    let s1 = attempt!(report, load_system(left), load_failure);
    let s2 = attempt!(report, load_system(right), load_failure);
    let m = attempt!(report, load_system(fragment), load_failure);
    let ty = m.statement_type();
    let r1 = attempt!(report, io::read_arg::<MapDoc>(r1), load_failure);
    let r1 = attempt!(report, r1.interpretation(ty), combinator_failure);
    let r2 = attempt!(report, io::read_arg::<MapDoc>(r2), load_failure);
    let r2 = attempt!(report, r2.interpretation(ty), combinator_failure);
    let generators: Vec<Statement> = attempt!(report, io::read_arg(gens), load_failure);
    let entries: Option<Vec<SuiteEntry>> = match suite_arg {
        Some(a) => Some(attempt!(report, io::read_arg(a), load_failure)),
        None => None,
    };
    let check = entries.as_deref().map(|suite| FragmentCheck {
        suite,
        substitutions: &[],
        budget: b,
    });
    let validated = check.is_some();
    let a = attempt!(report, amalgamated_system(&s1, &s2, &m, &r1, &r2, &generators, check), combinator_failure);
    if validated {
        report.check("fragment maps preserve and reflect the suite", Status::Pass, Some("within budget".into()));
    } else {
        report.check("fragment maps preserve and reflect the suite", Status::Skipped, Some("no --suite given".into()));
    }
    let mut bridged = 0;
    for (i, rule) in a.theta.iter().enumerate() {
        let r = attempt!(report, derive(&a.system, &rule.premises, &rule.conclusion, Budget::depth(2)), logic_failure);
        if r.found() {
            bridged += 1;
        } else {
            report.witness(json!({ "bridge": i, "rule": rule }));
        }
    }
    report.require(
        "bridge rules apply in one step",
        bridged == a.theta.len(),
        Some(format!("{bridged} of {} bridges", a.theta.len())),
    );
    let system = to_value(&a.system);
    report.result = json!({ "system": system, "shared": a.shared, "bridges": a.theta, "theta_offset": a.theta_offset() });
    (report.finish(), Some(system))
}

fn interpret_proof_cmd(common: &Common, proof: &str, target: &str, map: &str, source: Option<&str>, mut report: Report) -> Outcome {
    let b = attempt!(report, budget(common, 4), load_failure);
    report.parameters = parameters(common, Some(b));
    let doc: ProofDoc = attempt!(report, io::read_arg(proof), load_failure);
    let src = match (source, &doc.system) {
        (Some(a), _) => attempt!(report, load_system(a), load_failure),
        (None, Some(s)) => s.clone(),
        (None, None) => {
            load_failure(&mut report, io::input_error("the proof carries no system; pass --source"));
            return (report.finish(), None);
        }
    };
    let t = attempt!(report, load_system(target), load_failure);
    let iota = attempt!(report, io::read_arg::<MapDoc>(map), load_failure);
    let iota = attempt!(report, iota.interpretation(src.statement_type()), combinator_failure);
    let d = doc.derivation();
    attempt!(report, check_derivation(&src, &doc.premises, &d), logic_failure);
    report.check("source derivation checks", Status::Pass, None);
    let out = attempt!(report, interpret_proof(&d, &src, &doc.premises, &t, &iota, b), combinator_failure);
    let images = iota.image_set(&doc.premises);
    let checked = check_derivation(&t, &images, &out);
    report.require("translated derivation checks in the target", checked.is_ok(), checked.err().map(|e| e.to_string()));
    let goal = d.conclusion().map(|g| iota.image(g));
    let reached = match (&goal, out.conclusion()) {
        (Some(g), Some(c)) => g.last() == Some(c),
        _ => false,
    };
    report.require("ends in the image of the conclusion", reached, None);
    let artifact = to_value(&ProofDoc {
        system: Some(t.clone()),
        premises: images,
        goal: out.conclusion().cloned(),
        steps: out.steps.clone(),
    });
    report.result = json!({ "source_steps": d.len(), "steps": out.len(), "derivation": out });
    (report.finish(), Some(artifact))
}

fn suite_cmd(resolver: &Resolver, common: &Common, only: &[u32], mut report: Report) -> Outcome {
    let wanted = |id: u32| only.is_empty() || only.contains(&id);
    let c = &resolver.catalog;
    let mut runs = Vec::new();
    let table: Vec<(u32, Box<dyn Fn() -> suite::CriterionReport + '_>)> = vec![
        (1, Box::new(|| suite::axiom_verifiers(c))),
        (2, Box::new(|| suite::tensor_oracle(c))),
        (3, Box::new(|| suite::unit_isomorphism(c))),
        (4, Box::new(|| suite::hom_tensor_adjunction(c))),
        (5, Box::new(|| suite::qm_coproducts(c))),
        (6, Box::new(|| suite::unit_embedding(c))),
        (7, Box::new(|| suite::qm_pushouts(c))),
        (8, Box::new(suite::cpl_identity)),
        (9, Box::new(suite::cpl_coproduct)),
        (10, Box::new(|| suite::nucleus_laws(common.seed))),
        (11, Box::new(suite::proof_interpretation)),
    ];
    for (id, run) in table {
        if !wanted(id) {
            continue;
        }
        let r = run();
        eprintln!("{}", r.line());
        report.require(format!("criterion {}: {}", r.id, r.name), r.passed, Some(r.details.join("; ")));
        if !r.passed {
            report.witness(json!({ "criterion": r.id, "details": r.details }));
        }
        runs.push(json!({ "id": r.id, "name": r.name, "passed": r.passed, "details": r.details }));
    }
    if runs.is_empty() {
        load_failure(&mut report, io::input_error("no criteria selected"));
    }
    report.result = json!({ "criteria": runs });
    (report.finish(), None)
}

fn run(cli: &Cli) -> Outcome {
    let common = &cli.common;
    let mut report = Report::new(cli.command.name(), parameters(common, None));
    let resolver = attempt!(report, Resolver::from_env(common.enum_bound), load_failure);
    match &cli.command {
        Command::Verify { structure } => verify(&resolver, structure, report),
        Command::Tensor { left, right } => tensor(&resolver, left, right, report),
        Command::Product { modules } => product(&resolver, modules, report),
        Command::Pushout { span } => pushout(&resolver, span, report),
        Command::QmCoproduct { file, instance } => qm_coproduct_cmd(&resolver, file.as_deref(), instance.as_deref(), report),
        Command::QmPushout { file, instance } => qm_pushout_cmd(&resolver, file.as_deref(), instance.as_deref(), report),
        Command::Derive { system, from, goal } => derive_cmd(common, system, from, goal, report),
        Command::Nucleus {
            nucleus,
            system,
            from,
            universe_depth,
            vars,
            samples,
        } => match (nucleus, system) {
            (Some(n), None) => module_nucleus(&resolver, n, report),
            (None, Some(s)) => logic_nucleus(common, s, from, *universe_depth, *vars, *samples, report),
            _ => {
                load_failure(&mut report, io::input_error("give either a nucleus or --system"));
                (report.finish(), None)
            }
        },
        Command::Coproduct { systems } => coproduct_cmd(common, systems, report),
        Command::Amalgamate {
            left,
            right,
            fragment,
            r1,
            r2,
            gens,
            suite,
        } => amalgamate_cmd(common, left, right, fragment, r1, r2, gens, suite.as_deref(), report),
        Command::InterpretProof { proof, target, map, source } => interpret_proof_cmd(common, proof, target, map, source.as_deref(), report),
        Command::Suite { only } => suite_cmd(&resolver, common, only, report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, artifact) = run(&cli);
    let mut code = report.status.exit_code();
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    // a closed stdout is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &cli.common.out {
        let written = match &artifact {
            Some(a) => io::write_json(path, a),
            None => io::write_json(path, &report),
        };
        if let Err(e) = written {
            eprintln!("{e}");
            code = code.max(3);
        }
    }
    ExitCode::from(code)
}
