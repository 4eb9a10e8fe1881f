//! Operations shared by the command line and the HTTP service, with their
//! JSON report types.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use aspwb_core::analysis::{build_outline, lint, OutlineNode};
use aspwb_core::engine::{solve, SolveOptions};
use aspwb_core::interp::{diff, to_facts, to_tree, TreeNode};
use aspwb_core::parse::parse_interpretation;
use aspwb_core::{
    parse_named, Diagnostic, Dialect, GroundLiteral, Interpretation, PredicateSig, Program, Severity, Value,
};
use aspwb_tools::{run, LaunchConfiguration, OutputMode};
use aspwb_viz::{
    abduce, apply_edits, build_scene, eval_vis_program, generic_scene, parse_vis_program, AbductionProblem,
    AnswerSetSolver, Edit, InternalSolver, VisAtomSet,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{ErrorKind, WbError};
use crate::launch::LaunchSolver;
use crate::workspace::{StoredScene, Workspace};

/// Dialect from an explicit choice or the file extension.
pub fn dialect_for(path: &Path, explicit: Option<Dialect>) -> Result<Dialect, WbError> {
    if let Some(d) = explicit {
        return Ok(d);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("lp" | "gringo" | "clingo" | "asp") => Ok(Dialect::Gringo),
        Some("dlv") => Ok(Dialect::Dlv),
        _ => Err(WbError::new(
            ErrorKind::Usage,
            "unknown-dialect",
            format!("cannot tell the dialect of {}; pass --dialect", path.display()),
        )),
    }
}

pub fn read_file(path: &Path) -> Result<String, WbError> {
    std::fs::read_to_string(path).map_err(|e| WbError::io(path, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub file: String,
    pub dialect: Dialect,
    pub rule_count: usize,
    pub errors: usize,
    pub warnings: usize,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outline: Option<OutlineNode>,
}

impl DiagnosticsReport {
    pub fn has_errors(&self) -> bool {
        self.errors > 0
    }
}

/// Parses `source`; with `with_lint` also runs the static checks.
pub fn check_source(file: &str, source: &str, dialect: Dialect, with_lint: bool) -> (DiagnosticsReport, Program) {
    let parsed = parse_named(file, source, dialect);
    let mut diagnostics = parsed.diagnostics;
    if with_lint {
        diagnostics.extend(lint(&parsed.program));
        diagnostics.sort_by_key(|d| (d.span.start_byte, d.span.end_byte));
    }
    let count = |s: Severity| diagnostics.iter().filter(|d| d.severity == s).count();
    let report = DiagnosticsReport {
        file: file.to_string(),
        dialect,
        rule_count: parsed.program.rules.len(),
        errors: count(Severity::Error),
        warnings: count(Severity::Warning),
        diagnostics,
        outline: None,
    };
    (report, parsed.program)
}

pub fn outline(program: &Program) -> OutlineNode {
    build_outline(program)
}

fn parse_failure(report: &DiagnosticsReport) -> WbError {
    let first = report.diagnostics.iter().find(|d| d.severity == Severity::Error);
    let message = match first {
        Some(d) => format!("{}:{}:{}: {}", report.file, d.span.start_line, d.span.start_col, d.message),
        None => format!("{} has errors", report.file),
    };
    WbError::new(ErrorKind::Findings, "parse-error", message)
}

/// Parses and lints every source, merging them into one program.
pub fn load_program(sources: &[(String, String)], dialect: Dialect) -> Result<Program, WbError> {
    let mut program = Program::new(dialect);
    for (file, text) in sources {
        let (report, p) = check_source(file, text, dialect, true);
        if report.has_errors() {
            return Err(parse_failure(&report));
        }
        program.rules.extend(p.rules);
        program.source.push_str(text);
    }
    Ok(program)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnswerSet {
    pub index: usize,
    pub literals: Vec<GroundLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub engine: String,
    pub satisfiable: bool,
    pub count: usize,
    pub answer_sets: Vec<AnswerSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_codes: Option<Vec<Option<i32>>>,
}

impl SolveReport {
    fn new(engine: &str, sets: &[Interpretation]) -> Self {
        Self {
            engine: engine.to_string(),
            satisfiable: !sets.is_empty(),
            count: sets.len(),
            answer_sets: sets
                .iter()
                .enumerate()
                .map(|(i, s)| AnswerSet {
                    index: i + 1,
                    literals: s.iter().cloned().collect(),
                    label: None,
                })
                .collect(),
            raw_output: None,
            exit_codes: None,
        }
    }
}

pub fn solve_internal(program: &Program, limit: Option<usize>) -> Result<(SolveReport, Vec<Interpretation>), WbError> {
    let options = SolveOptions {
        limit,
        ..SolveOptions::default()
    };
    let sets = solve(program, &options)?;
    Ok((SolveReport::new("internal", &sets), sets))
}

/// Runs a registered launch, optionally over other input files.
pub fn solve_launch(
    ws: &Workspace,
    launch: &str,
    files: &[std::path::PathBuf],
    limit: Option<usize>,
) -> Result<(SolveReport, Vec<Interpretation>), WbError> {
    let registry = ws.registry.snapshot();
    let mut l: LaunchConfiguration = registry
        .launch(launch)
        .cloned()
        .ok_or_else(|| WbError::new(ErrorKind::NotFound, "launch-error", format!("no launch configuration `{launch}`")))?;
    if !files.is_empty() {
        l.input_files = files.to_vec();
    }
    l.output_mode = OutputMode::ParseInterpretations;
    let result = run(&registry, &l, None)?;
    let mut sets = result.interpretations;
    if let Some(n) = limit {
        sets.truncate(n);
    }
    let mut report = SolveReport::new("launch", &sets);
    report.satisfiable = result.satisfiable.unwrap_or(!sets.is_empty());
    report.raw_output = Some(result.raw_output);
    report.exit_codes = Some(result.exit_codes);
    Ok((report, sets))
}

/// Labels answer sets `<prefix>-<k>` in the store.
pub fn store_answer_sets(
    ws: &Workspace,
    prefix: &str,
    report: &mut SolveReport,
    sets: &[Interpretation],
) -> Result<(), WbError> {
    for (a, s) in report.answer_sets.iter_mut().zip(sets) {
        let label = format!("{prefix}-{}", a.index);
        ws.interpretations.put(&label, s, true)?;
        a.label = Some(label);
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpretationView {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub literals: Vec<GroundLiteral>,
    pub facts: String,
    pub tree: TreeNode,
}

impl InterpretationView {
    pub fn new(i: &Interpretation, dialect: Dialect) -> Result<Self, WbError> {
        Ok(Self {
            label: i.label.clone(),
            literals: i.iter().cloned().collect(),
            facts: to_facts(i.iter(), dialect).map_err(|e| WbError::new(ErrorKind::Usage, "bad-request", e.to_string()))?,
            tree: to_tree(i),
        })
    }
}

/// An interpretation given by store label, literal list, or fact text.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InterpretationRef {
    Label { label: String },
    Literals { literals: Vec<GroundLiteral> },
    Facts {
        facts: String,
        #[serde(default)]
        dialect: Option<Dialect>,
    },
}

impl InterpretationRef {
    pub fn resolve(&self, ws: &Workspace) -> Result<Interpretation, WbError> {
        match self {
            InterpretationRef::Label { label } => ws.interpretations.get(label),
            InterpretationRef::Literals { literals } => Interpretation::from_literals(literals.iter().cloned())
                .map_err(|e| WbError::new(ErrorKind::Usage, "inconsistent-interpretation", e.to_string())),
            InterpretationRef::Facts { facts, dialect } => parse_facts(facts, dialect.unwrap_or(Dialect::Gringo)),
        }
    }
}

pub fn parse_facts(text: &str, dialect: Dialect) -> Result<Interpretation, WbError> {
    parse_interpretation(text, dialect).map_err(|e| WbError::new(ErrorKind::Usage, "invalid-interpretation", e.to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffReport {
    pub left: String,
    pub right: String,
    pub only_left: Vec<GroundLiteral>,
    pub only_right: Vec<GroundLiteral>,
    pub common: Vec<GroundLiteral>,
    pub identical: bool,
}

pub fn diff_report(left: &Interpretation, right: &Interpretation) -> DiffReport {
    let d = diff(left, right);
    let name = |i: &Interpretation, side: &str| i.label.clone().unwrap_or_else(|| side.to_string());
    DiffReport {
        left: name(left, "left"),
        right: name(right, "right"),
        identical: d.is_identical(),
        only_left: d.only_left.into_iter().collect(),
        only_right: d.only_right.into_iter().collect(),
        common: d.common.into_iter().collect(),
    }
}

fn scene_id(scene: &StoredScene) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&scene.scene).expect("scenes serialise"));
    h.update(serde_json::to_vec(&scene.vis_atoms).expect("atoms serialise"));
    let digest = h.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn solver_for(ws: Option<&Workspace>, launch: Option<&str>) -> Result<Box<dyn AnswerSetSolver>, WbError> {
    match launch {
        None => Ok(Box::new(InternalSolver::default())),
        Some(id) => {
            let ws = ws.ok_or_else(|| WbError::usage("a launch needs a workspace"))?;
            Ok(Box::new(LaunchSolver::new(ws.registry.snapshot(), id)?))
        }
    }
}

/// Builds the scene for `interpretation`: the generic hypergraph when no
/// program is given, else the program's visualization.
pub fn visualize(
    ws: Option<&Workspace>,
    interpretation: &Interpretation,
    program: Option<(&str, Dialect)>,
    launch: Option<&str>,
) -> Result<StoredScene, WbError> {
    let (scene, vis_atoms) = match program {
        None => (generic_scene(interpretation), VisAtomSet::default()),
        Some((text, dialect)) => {
            let p = parse_vis_program(text, dialect)?;
            let solver = solver_for(ws, launch)?;
            let vis = eval_vis_program(&p, interpretation, solver.as_ref())?;
            (build_scene(&vis)?, vis)
        }
    };
    let mut stored = StoredScene {
        scene_id: String::new(),
        scene,
        vis_atoms,
        source: Some(interpretation.clone()),
    };
    stored.scene_id = scene_id(&stored);
    if let Some(ws) = ws {
        ws.scenes.put(&stored)?;
    }
    Ok(stored)
}

pub fn parse_signature(text: &str) -> Result<PredicateSig, WbError> {
    let bad = || WbError::usage(format!("`{text}` is not a predicate signature like `q/2`"));
    let (name, arity) = text.rsplit_once('/').ok_or_else(bad)?;
    let arity: usize = arity.parse().map_err(|_| bad())?;
    let ok = name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok {
        return Err(bad());
    }
    Ok(PredicateSig::new(name, arity))
}

/// Candidate instances of each abducible: the product of the values seen
/// at each argument position in `original`.
pub fn default_domains(original: &Interpretation, abducibles: &BTreeSet<PredicateSig>) -> Interpretation {
    let mut out = Interpretation::new();
    for sig in abducibles {
        let mut columns: Vec<BTreeSet<&Value>> = vec![BTreeSet::new(); sig.arity];
        let mut seen = false;
        for l in original.iter().filter(|l| l.signature() == *sig) {
            seen = true;
            for (c, v) in columns.iter_mut().zip(&l.args) {
                c.insert(v);
            }
        }
        if !seen {
            continue;
        }
        let mut tuples: Vec<Vec<Value>> = vec![Vec::new()];
        for c in &columns {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    c.iter().map(move |v| {
                        let mut t = t.clone();
                        t.push((*v).clone());
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            let _ = out.insert(GroundLiteral::new(&sig.name, t));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbduceRequest {
    pub program: String,
    #[serde(default)]
    pub dialect: Option<Dialect>,
    pub abducibles: Vec<String>,
    #[serde(default)]
    pub domains: Option<Vec<GroundLiteral>>,
    /// The visualized interpretation; taken from the scene when omitted.
    #[serde(default)]
    pub original: Option<InterpretationRef>,
    #[serde(default)]
    pub scene_id: Option<String>,
    /// Visualization atoms to edit, instead of evaluating the program.
    #[serde(default)]
    pub vis_atoms: Option<Vec<GroundLiteral>>,
    #[serde(default)]
    pub edits: Vec<Edit>,
    #[serde(default)]
    pub store: Option<String>,
    #[serde(default)]
    pub launch: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbduceReport {
    pub interpretation: Interpretation,
    pub vis_atoms: VisAtomSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stored: Option<String>,
}

pub fn run_abduce(ws: Option<&Workspace>, req: &AbduceRequest) -> Result<AbduceReport, WbError> {
    let dialect = req.dialect.unwrap_or(Dialect::Gringo);
    let program = parse_vis_program(&req.program, dialect)?;
    let stored_scene = match (&req.scene_id, ws) {
        (Some(id), Some(ws)) => Some(ws.scenes.get(id)?),
        (Some(_), None) => return Err(WbError::usage("scene ids need a workspace")),
        _ => None,
    };
    let original = match (&req.original, ws) {
        (Some(r), Some(ws)) => Some(r.resolve(ws)?),
        (Some(InterpretationRef::Label { .. }), None) => return Err(WbError::usage("labels need a workspace")),
        (Some(r @ (InterpretationRef::Literals { .. } | InterpretationRef::Facts { .. })), None) => {
            let tmp = tempfile::tempdir().map_err(|e| WbError::io(Path::new("."), e))?;
            Some(r.resolve(&Workspace::open(tmp.path())?)?)
        }
        (None, _) => stored_scene.as_ref().and_then(|s| s.source.clone()),
    };
    let solver = solver_for(ws, req.launch.as_deref())?;
    let base = if let Some(atoms) = &req.vis_atoms {
        VisAtomSet::from_literals(atoms.iter().cloned())?
    } else if let Some(s) = &stored_scene {
        s.vis_atoms.clone()
    } else if let Some(o) = &original {
        eval_vis_program(&program, o, solver.as_ref())?
    } else {
        return Err(WbError::usage("give `vis_atoms`, `scene_id`, or `original`"));
    };
    let target = apply_edits(&base, &req.edits)?;
    let abducibles: BTreeSet<PredicateSig> = req.abducibles.iter().map(|a| parse_signature(a)).collect::<Result<_, _>>()?;
    if abducibles.is_empty() {
        return Err(WbError::usage("at least one abducible predicate is needed"));
    }
    let domains = match (&req.domains, &original) {
        (Some(d), _) => Interpretation::from_literals(d.iter().cloned())
            .map_err(|e| WbError::new(ErrorKind::Usage, "inconsistent-interpretation", e.to_string()))?,
        (None, Some(o)) => default_domains(o, &abducibles),
        (None, None) => return Err(WbError::usage("give `domains` or an original interpretation")),
    };
    let problem = AbductionProblem {
        vis_program: program,
        target: target.clone(),
        abducibles,
        domains,
    };
    let mut found = abduce(&problem, solver.as_ref())?;
    let mut stored = None;
    if let Some(label) = &req.store {
        let ws = ws.ok_or_else(|| WbError::usage("storing needs a workspace"))?;
        ws.interpretations.put(label, &found, true)?;
        found = found.with_label(label.clone());
        stored = Some(label.clone());
    }
    let diff = original.as_ref().map(|o| diff_report(o, &found));
    Ok(AbduceReport {
        interpretation: found,
        vis_atoms: target,
        diff,
        stored,
    })
}

/// Groups answer-set literals per predicate, for compact text output.
pub fn by_predicate(i: &Interpretation) -> BTreeMap<PredicateSig, Vec<&GroundLiteral>> {
    let mut m: BTreeMap<PredicateSig, Vec<&GroundLiteral>> = BTreeMap::new();
    for l in i.iter() {
        m.entry(l.signature()).or_default().push(l);
    }
    m
}
