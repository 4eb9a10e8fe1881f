//! Command-line interface. Exit codes: 0 success, 1 findings (errors in
//! the input, unsatisfiable), 2 usage or environment failure.

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use aspwb_core::analysis::OutlineNode;
use aspwb_core::interp::{to_facts, TreeNode};
use aspwb_core::{Dialect, Interpretation};
use aspwb_tools::{
    run, InputMode, LaunchConfiguration, OutputFormat, OutputMode, Pipeline, ToolConfiguration, ToolKind,
};
use aspwb_viz::{export_svg, Edit};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{ErrorKind, WbError};
use crate::ops::{self, AbduceRequest, InterpretationRef};
use crate::workspace::Workspace;

#[derive(Debug, Parser)]
#[command(name = "aspwb", version, about = "Workbench for answer set programs")]
pub struct Cli {
    /// Dialect of the input files; inferred from the extension otherwise.
    #[arg(long, global = true)]
    pub dialect: Option<Dialect>,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory holding the `.aspwb` state.
    #[arg(long, global = true, default_value = ".")]
    pub workspace: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report syntax errors.
    Parse { file: PathBuf },
    /// Report syntax errors and static findings such as unsafe variables.
    Lint { file: PathBuf },
    /// Print the program outline.
    Outline { file: PathBuf },
    /// Compute answer sets with the internal engine or a launch.
    Solve(SolveArgs),
    /// Manage stored interpretations.
    #[command(subcommand)]
    Interp(InterpCommand),
    /// Draw an interpretation as SVG.
    Viz(VizArgs),
    /// Find an interpretation whose visualization matches an edited scene.
    Abduce(AbduceArgs),
    /// Manage external tools, pipelines and launch configurations.
    #[command(subcommand)]
    Tools(ToolsCommand),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutputStyle {
    Raw,
    Facts,
    Tree,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Program files, merged; with --launch they replace the launch's inputs.
    pub files: Vec<PathBuf>,
    #[arg(long)]
    pub launch: Option<String>,
    /// Stop after N answer sets; 0 means all.
    #[arg(long, default_value_t = 0)]
    pub limit: usize,
    #[arg(long, value_enum, default_value = "raw")]
    pub output: OutputStyle,
    /// Store answer sets under `<PREFIX>-<k>`.
    #[arg(long)]
    pub store: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum InterpCommand {
    List,
    Show {
        label: String,
        #[arg(long, value_enum, default_value = "facts")]
        output: OutputStyle,
    },
    /// Store the facts of FILE under LABEL.
    Add {
        label: String,
        file: PathBuf,
        #[arg(long)]
        force: bool,
    },
    Remove { label: String },
    /// Compare two interpretations, each a label or a fact file.
    Diff { left: String, right: String },
    /// Print an interpretation as facts.
    Facts { label: String },
}

#[derive(Debug, Args)]
pub struct VizArgs {
    /// Fact file with the interpretation.
    #[arg(long, conflicts_with = "label", required_unless_present = "label")]
    pub interp: Option<PathBuf>,
    #[arg(long)]
    pub label: Option<String>,
    /// Visualization program.
    #[arg(long, conflicts_with = "generic", required_unless_present = "generic")]
    pub program: Option<PathBuf>,
    /// Draw the generic hypergraph instead.
    #[arg(long)]
    pub generic: bool,
    /// Run the visualization program through this launch.
    #[arg(long)]
    pub launch: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the scene as JSON.
    #[arg(long)]
    pub scene_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AbduceArgs {
    #[arg(long)]
    pub program: PathBuf,
    /// Label of the original interpretation.
    #[arg(long, conflicts_with = "interp")]
    pub label: Option<String>,
    /// Fact file with the original interpretation.
    #[arg(long)]
    pub interp: Option<PathBuf>,
    /// Stored scene to edit instead of re-running the program.
    #[arg(long)]
    pub scene: Option<String>,
    /// JSON array of edit operations.
    #[arg(long)]
    pub edits: PathBuf,
    /// Predicate that may change, as name/arity. Repeatable.
    #[arg(long = "abducible", required = true)]
    pub abducibles: Vec<String>,
    /// Fact file listing the candidate abducible atoms.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    #[arg(long)]
    pub store: Option<String>,
    #[arg(long)]
    pub launch: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Gringo,
    Clasp,
    Dlv,
    Generic,
}

impl From<KindArg> for ToolKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Gringo => ToolKind::Gringo,
            KindArg::Clasp => ToolKind::Clasp,
            KindArg::Dlv => ToolKind::Dlv,
            KindArg::Generic => ToolKind::Generic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InputArg {
    Stdin,
    Arguments,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Clasp,
    Dlv,
}

#[derive(Debug, Subcommand)]
pub enum ToolsCommand {
    List,
    AddTool {
        id: String,
        executable: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Default argument. Repeatable.
        #[arg(long = "arg", allow_hyphen_values = true)]
        args: Vec<String>,
        #[arg(long, value_enum)]
        input: Option<InputArg>,
        /// Replace an existing tool of the same id.
        #[arg(long)]
        update: bool,
    },
    AddPipeline {
        id: String,
        #[arg(required = true)]
        stages: Vec<String>,
    },
    AddLaunch {
        id: String,
        /// Tool or pipeline id.
        tool: String,
        files: Vec<PathBuf>,
        #[arg(long = "extra-arg", allow_hyphen_values = true)]
        extra_args: Vec<String>,
        /// Pass output through unparsed.
        #[arg(long)]
        raw: bool,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Remove a tool, pipeline or launch.
    Remove { id: String },
    /// Run a launch configuration.
    Run { id: String },
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 7878)]
    pub port: u16,
    /// Directory of static files served under `/`.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}

/// What a command printed and how it should exit.
struct Outcome {
    code: i32,
}

const OK: Outcome = Outcome { code: 0 };
const FINDINGS: Outcome = Outcome { code: 1 };

struct Ctx {
    dialect: Option<Dialect>,
    json: bool,
    root: PathBuf,
}

impl Ctx {
    fn workspace(&self) -> Result<Workspace, WbError> {
        Workspace::open(&self.root)
    }

    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        let mut out = std::io::stdout().lock();
        if self.json {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(value).expect("reports serialise"));
        } else {
            let _ = write!(out, "{}", text());
        }
    }
}

/// Runs the command and returns the process exit code. Errors are
/// reported on stderr, and also on stdout as JSON with `--json`.
pub fn execute(cli: Cli) -> i32 {
    let ctx = Ctx {
        dialect: cli.dialect,
        json: cli.json,
        root: cli.workspace,
    };
    match dispatch(&ctx, cli.command) {
        Ok(o) => o.code,
        Err(e) => {
            if ctx.json {
                println!("{}", serde_json::to_string_pretty(&e.body()).expect("errors serialise"));
            }
            eprintln!("error[{}]: {}", e.code, e.message);
            e.kind.exit_code()
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<Outcome, WbError> {
    match command {
        Command::Parse { file } => check(ctx, &file, false, false),
        Command::Lint { file } => check(ctx, &file, true, false),
        Command::Outline { file } => check(ctx, &file, false, true),
        Command::Solve(a) => solve(ctx, a),
        Command::Interp(c) => interp(ctx, c),
        Command::Viz(a) => viz(ctx, a),
        Command::Abduce(a) => abduce(ctx, a),
        Command::Tools(c) => tools(ctx, c),
        Command::Serve(a) => serve(ctx, a),
    }
}

fn check(ctx: &Ctx, file: &Path, with_lint: bool, with_outline: bool) -> Result<Outcome, WbError> {
    let dialect = ops::dialect_for(file, ctx.dialect)?;
    let source = ops::read_file(file)?;
    let name = file.display().to_string();
    let (mut report, program) = ops::check_source(&name, &source, dialect, with_lint);
    if with_outline {
        report.outline = Some(ops::outline(&program));
    }
    ctx.emit(&report, || {
        let mut s = String::new();
        for d in &report.diagnostics {
            let sev = d.severity;
            s.push_str(&format!(
                "{}:{}:{}: {sev}[{}]: {}\n",
                name, d.span.start_line, d.span.start_col, d.code, d.message
            ));
        }
        if let Some(o) = &report.outline {
            outline_text(o, 0, &mut s);
        } else if report.diagnostics.is_empty() {
            s.push_str(&format!("{name}: ok, {} rules\n", report.rule_count));
        }
        s
    });
    Ok(if report.has_errors() { FINDINGS } else { OK })
}

fn outline_text(node: &OutlineNode, depth: usize, out: &mut String) {
    out.push_str(&format!("{:indent$}{}\n", "", node.label, indent = depth * 2));
    for c in &node.children {
        outline_text(c, depth + 1, out);
    }
}

fn tree_text(node: &TreeNode, depth: usize, out: &mut String) {
    out.push_str(&format!("{:indent$}{}\n", "", node.label, indent = depth * 2));
    for c in &node.children {
        tree_text(c, depth + 1, out);
    }
}

fn interpretation_text(i: &Interpretation, style: OutputStyle, dialect: Dialect) -> Result<String, WbError> {
    Ok(match style {
        OutputStyle::Raw => format!("{}\n", i.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")),
        OutputStyle::Facts => {
            let f = to_facts(i.iter(), dialect).map_err(|e| WbError::usage(e.to_string()))?;
            if f.is_empty() {
                f
            } else {
                f + "\n"
            }
        }
        OutputStyle::Tree => {
            let mut s = String::new();
            tree_text(&aspwb_core::interp::to_tree(i), 0, &mut s);
            s
        }
    })
}

fn solve(ctx: &Ctx, a: SolveArgs) -> Result<Outcome, WbError> {
    let limit = (a.limit > 0).then_some(a.limit);
    let ws = if a.launch.is_some() || a.store.is_some() {
        Some(ctx.workspace()?)
    } else {
        None
    };
    let mut dialect = ctx.dialect.unwrap_or(Dialect::Gringo);
    let (mut report, sets) = match &a.launch {
        Some(id) => ops::solve_launch(ws.as_ref().expect("opened above"), id, &a.files, limit)?,
        None => {
            if a.files.is_empty() {
                return Err(WbError::usage("no input files"));
            }
            dialect = ops::dialect_for(&a.files[0], ctx.dialect)?;
            let mut sources = Vec::new();
            for f in &a.files {
                sources.push((f.display().to_string(), ops::read_file(f)?));
            }
            let program = ops::load_program(&sources, dialect)?;
            ops::solve_internal(&program, limit)?
        }
    };
    if let (Some(prefix), Some(ws)) = (&a.store, &ws) {
        ops::store_answer_sets(ws, prefix, &mut report, &sets)?;
    }
    let mut text = String::new();
    for (k, s) in sets.iter().enumerate() {
        text.push_str(&format!("Answer: {}\n", k + 1));
        text.push_str(&interpretation_text(s, a.output, dialect)?);
    }
    text.push_str(if report.satisfiable { "SATISFIABLE\n" } else { "UNSATISFIABLE\n" });
    ctx.emit(&report, || text);
    Ok(if report.satisfiable { OK } else { FINDINGS })
}

/// A label, or a fact file when a file of that name exists.
fn resolve_interp(ctx: &Ctx, ws: &Workspace, name: &str) -> Result<Interpretation, WbError> {
    let path = Path::new(name);
    if path.is_file() {
        let dialect = ops::dialect_for(path, ctx.dialect).unwrap_or(Dialect::Gringo);
        return Ok(ops::parse_facts(&ops::read_file(path)?, dialect)?.with_label(name));
    }
    ws.interpretations.get(name)
}

fn interp(ctx: &Ctx, c: InterpCommand) -> Result<Outcome, WbError> {
    let ws = ctx.workspace()?;
    let dialect = ctx.dialect.unwrap_or(Dialect::Gringo);
    match c {
        InterpCommand::List => {
            let labels = ws.interpretations.labels()?;
            ctx.emit(&serde_json::json!({ "labels": labels }), || {
                labels.iter().map(|l| format!("{l}\n")).collect()
            });
        }
        InterpCommand::Show { label, output } => {
            let i = ws.interpretations.get(&label)?;
            let view = ops::InterpretationView::new(&i, dialect)?;
            let text = interpretation_text(&i, output, dialect)?;
            ctx.emit(&view, || text);
        }
        InterpCommand::Facts { label } => {
            let i = ws.interpretations.get(&label)?;
            let view = ops::InterpretationView::new(&i, dialect)?;
            let text = interpretation_text(&i, OutputStyle::Facts, dialect)?;
            ctx.emit(&view, || text);
        }
        InterpCommand::Add { label, file, force } => {
            let d = ops::dialect_for(&file, ctx.dialect).unwrap_or(Dialect::Gringo);
            let i = ops::parse_facts(&ops::read_file(&file)?, d)?;
            ws.interpretations.put(&label, &i, force)?;
            ctx.emit(&serde_json::json!({ "label": label, "count": i.len() }), || {
                format!("stored {} literals as {label}\n", i.len())
            });
        }
        InterpCommand::Remove { label } => {
            ws.interpretations.remove(&label)?;
            ctx.emit(&serde_json::json!({ "removed": label }), || format!("removed {label}\n"));
        }
        InterpCommand::Diff { left, right } => {
            let l = resolve_interp(ctx, &ws, &left)?;
            let r = resolve_interp(ctx, &ws, &right)?;
            let d = ops::diff_report(&l, &r);
            ctx.emit(&d, || {
                let mut s = String::new();
                for x in &d.only_left {
                    s.push_str(&format!("- {x}\n"));
                }
                for x in &d.only_right {
                    s.push_str(&format!("+ {x}\n"));
                }
                if d.identical {
                    s.push_str("identical\n");
                }
                s
            });
        }
    }
    Ok(OK)
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), WbError> {
    std::fs::write(path, data).map_err(|e| WbError::io(path, e))
}

fn viz(ctx: &Ctx, a: VizArgs) -> Result<Outcome, WbError> {
    let ws = ctx.workspace()?;
    let interpretation = match (&a.interp, &a.label) {
        (Some(f), _) => {
            let d = ops::dialect_for(f, ctx.dialect).unwrap_or(Dialect::Gringo);
            ops::parse_facts(&ops::read_file(f)?, d)?
        }
        (None, Some(l)) => ws.interpretations.get(l)?,
        (None, None) => return Err(WbError::usage("give --interp or --label")),
    };
    let program = match &a.program {
        Some(p) => Some((ops::read_file(p)?, ops::dialect_for(p, ctx.dialect)?)),
        None => None,
    };
    let stored = ops::visualize(
        Some(&ws),
        &interpretation,
        program.as_ref().map(|(t, d)| (t.as_str(), *d)),
        a.launch.as_deref(),
    )?;
    write_file(&a.out, export_svg(&stored.scene).as_bytes())?;
    if let Some(p) = &a.scene_out {
        write_file(p, &serde_json::to_vec_pretty(&stored.scene).expect("scenes serialise"))?;
    }
    let summary = serde_json::json!({
        "scene_id": stored.scene_id,
        "elements": stored.scene.elements.len(),
        "svg": a.out,
    });
    ctx.emit(&summary, || {
        format!(
            "scene {} with {} elements written to {}\n",
            stored.scene_id,
            stored.scene.elements.len(),
            a.out.display()
        )
    });
    Ok(OK)
}

fn abduce(ctx: &Ctx, a: AbduceArgs) -> Result<Outcome, WbError> {
    let ws = ctx.workspace()?;
    let dialect = ops::dialect_for(&a.program, ctx.dialect)?;
    let edits: Vec<Edit> = serde_json::from_str(&ops::read_file(&a.edits)?)
        .map_err(|e| WbError::new(ErrorKind::Usage, "invalid-edit", format!("{}: {e}", a.edits.display())))?;
    let original = match (&a.label, &a.interp) {
        (Some(l), _) => Some(InterpretationRef::Label { label: l.clone() }),
        (None, Some(f)) => Some(InterpretationRef::Facts {
            facts: ops::read_file(f)?,
            dialect: Some(ops::dialect_for(f, ctx.dialect).unwrap_or(Dialect::Gringo)),
        }),
        (None, None) => None,
    };
    let domains = match &a.domain {
        Some(f) => Some(ops::parse_facts(&ops::read_file(f)?, dialect)?.iter().cloned().collect()),
        None => None,
    };
    let req = AbduceRequest {
        program: ops::read_file(&a.program)?,
        dialect: Some(dialect),
        abducibles: a.abducibles,
        domains,
        original,
        scene_id: a.scene,
        vis_atoms: None,
        edits,
        store: a.store,
        launch: a.launch,
    };
    let report = ops::run_abduce(Some(&ws), &req)?;
    let facts = interpretation_text(&report.interpretation, OutputStyle::Facts, dialect)?;
    ctx.emit(&report, || {
        let mut s = facts.clone();
        if let Some(d) = &report.diff {
            for x in &d.only_left {
                s.push_str(&format!("% - {x}\n"));
            }
            for x in &d.only_right {
                s.push_str(&format!("% + {x}\n"));
            }
        }
        s
    });
    Ok(OK)
}

fn tools(ctx: &Ctx, c: ToolsCommand) -> Result<Outcome, WbError> {
    let ws = ctx.workspace()?;
    match c {
        ToolsCommand::List => {
            let r = ws.registry.snapshot();
            let json = serde_json::json!({
                "tools": r.tools().map(|t| serde_json::json!({
                    "id": t.id, "executable_path": t.executable_path, "kind": t.kind,
                    "default_args": t.default_args, "input_mode": t.input_mode(),
                })).collect::<Vec<_>>(),
                "pipelines": r.pipelines().map(|p| serde_json::json!({ "id": p.id, "stages": p.stages })).collect::<Vec<_>>(),
                "launches": r.launches().map(|l| serde_json::json!({
                    "id": l.id, "tool": l.tool, "input_files": l.input_files,
                    "extra_args": l.extra_args, "output_mode": l.output_mode,
                })).collect::<Vec<_>>(),
            });
            ctx.emit(&json, || {
                let mut s = String::new();
                for t in r.tools() {
                    s.push_str(&format!("tool {} {} {}\n", t.id, t.executable_path.display(), t.default_args.join(" ")));
                }
                for p in r.pipelines() {
                    s.push_str(&format!("pipeline {} {}\n", p.id, p.stages.join(" | ")));
                }
                for l in r.launches() {
                    s.push_str(&format!("launch {} {}\n", l.id, l.tool));
                }
                s
            });
        }
        ToolsCommand::AddTool {
            id,
            executable,
            kind,
            args,
            input,
            update,
        } => {
            let mut t = ToolConfiguration::new(&id, executable, kind.into()).with_args(args);
            t.input_mode = input.map(|i| match i {
                InputArg::Stdin => InputMode::Stdin,
                InputArg::Arguments => InputMode::Arguments,
            });
            ws.registry.update(|r| if update { r.update_tool(t) } else { r.add_tool(t) })?;
            ctx.emit(&serde_json::json!({ "added": id }), || format!("added tool {id}\n"));
        }
        ToolsCommand::AddPipeline { id, stages } => {
            ws.registry.update(|r| r.add_pipeline(Pipeline::new(&id, stages)))?;
            ctx.emit(&serde_json::json!({ "added": id }), || format!("added pipeline {id}\n"));
        }
        ToolsCommand::AddLaunch {
            id,
            tool,
            files,
            extra_args,
            raw,
            format,
            timeout,
        } => {
            let mut l = LaunchConfiguration::new(&id, tool, files);
            l.extra_args = extra_args;
            l.output_mode = if raw { OutputMode::Raw } else { OutputMode::ParseInterpretations };
            l.format = format.map(|f| match f {
                FormatArg::Clasp => OutputFormat::ClaspLike,
                FormatArg::Dlv => OutputFormat::DlvLike,
            });
            l.timeout_secs = timeout;
            ws.registry.update(|r| r.add_launch(l))?;
            ctx.emit(&serde_json::json!({ "added": id }), || format!("added launch {id}\n"));
        }
        ToolsCommand::Remove { id } => {
            ws.registry.update(|r| {
                if r.launch(&id).is_some() {
                    r.remove_launch(&id).map(drop)
                } else if r.pipeline(&id).is_some() {
                    r.remove_pipeline(&id).map(drop)
                } else {
                    r.remove_tool(&id).map(drop)
                }
            })?;
            ctx.emit(&serde_json::json!({ "removed": id }), || format!("removed {id}\n"));
        }
        ToolsCommand::Run { id } => {
            let r = ws.registry.snapshot();
            let l = r.launch(&id).ok_or_else(|| WbError::not_found("launch", &id))?;
            let result = run(&r, l, None)?;
            let text = match l.output_mode {
                OutputMode::Raw => result.raw_output.clone(),
                OutputMode::ParseInterpretations => {
                    let mut s = String::new();
                    for (k, i) in result.interpretations.iter().enumerate() {
                        s.push_str(&format!("Answer: {}\n{}\n", k + 1, i.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")));
                    }
                    s
                }
            };
            ctx.emit(&result, || text);
            if result.satisfiable == Some(false) {
                return Ok(FINDINGS);
            }
        }
    }
    Ok(OK)
}

fn serve(ctx: &Ctx, a: ServeArgs) -> Result<Outcome, WbError> {
    let ws = ctx.workspace()?;
    let addr: SocketAddr = format!("{}:{}", a.host, a.port)
        .parse()
        .map_err(|e| WbError::usage(format!("bad address: {e}")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| WbError::io(Path::new("."), e))?;
    runtime.block_on(crate::server::serve(ws, addr, a.assets))?;
    Ok(OK)
}
