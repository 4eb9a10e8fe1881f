//! Piped execution of configured tools.
//!
//! All stages are spawned up front with each stage's stdout connected
//! directly to the next stage's stdin, so they run concurrently. The parent
//! feeds the first stage from one thread and drains the last stdout and
//! every stderr from others; nothing buffers a whole stream in a pipe.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Child, ChildStdout, Command, ExitStatus, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use aspwb_core::Interpretation;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::output::{parse_solver_output, OutputError, OutputFormat};
use crate::registry::{InputMode, LaunchConfiguration, OutputMode, Registry, RegistryError, ToolKind};

pub type Cancel = Arc<AtomicBool>;

const POLL: Duration = Duration::from_millis(5);

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] RegistryError),
    #[error("cannot read input file {path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("stage {stage} (`{tool}`): cannot launch {executable}: {source}")]
    Launch {
        stage: usize,
        tool: String,
        executable: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("stage {stage} (`{tool}`) failed with {status} and produced no output: {raw_errors}")]
    ToolFailure {
        stage: usize,
        tool: String,
        status: String,
        raw_errors: String,
    },
    #[error("run exceeded {0:?} and was killed")]
    Timeout(Duration),
    #[error("run cancelled")]
    Cancelled,
    #[error("solver output: {0}")]
    Format(#[from] OutputError),
}

impl RunError {
    pub fn code(&self) -> &'static str {
        match self {
            RunError::Config(e) => e.code(),
            RunError::Input { .. } => "input-error",
            RunError::Launch { .. } => "launch-error",
            RunError::ToolFailure { .. } => "tool-failure",
            RunError::Timeout(_) => "timeout",
            RunError::Cancelled => "cancelled",
            RunError::Format(_) => "format-error",
        }
    }
}

/// One process of a pipe, fully resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageSpec {
    pub tool: String,
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl StageSpec {
    pub fn new<I, S>(program: impl Into<PathBuf>, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let program = program.into();
        Self {
            tool: program.display().to_string(),
            program,
            args: args.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    /// Per stage; `None` when a stage was ended by a signal.
    pub exit_codes: Vec<Option<i32>>,
    pub raw_output: String,
    pub raw_errors: String,
    pub interpretations: Vec<Interpretation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub satisfiable: Option<bool>,
    pub duration_ms: u64,
}

/// Output of [`run_stages`] before any interpretation.
#[derive(Debug, Clone, Default)]
pub struct PipeOutput {
    pub statuses: Vec<ExitStatus>,
    pub stdout: Vec<u8>,
    /// Standard error of each stage.
    pub stderr: Vec<Vec<u8>>,
    pub duration: Duration,
}

fn drain<R: Read + Send + 'static>(mut r: R) -> JoinHandle<Vec<u8>> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        buf
    })
}

fn kill_all(children: &mut [Child]) {
    for c in children.iter_mut() {
        let _ = c.kill();
    }
    for c in children.iter_mut() {
        let _ = c.wait();
    }
}

/// Runs `stages` as a pipe. `stdin` feeds the first stage; `None` gives it
/// an empty standard input.
pub fn run_stages(
    stages: &[StageSpec],
    stdin: Option<Vec<u8>>,
    timeout: Duration,
    cancel: Option<&Cancel>,
) -> Result<PipeOutput, RunError> {
    assert!(!stages.is_empty(), "a pipe needs at least one stage");
    let start = Instant::now();
    let mut children: Vec<Child> = Vec::with_capacity(stages.len());
    let mut errs = Vec::with_capacity(stages.len());
    let mut upstream: Option<ChildStdout> = None;
    let mut writer = None;

    for (i, stage) in stages.iter().enumerate() {
        let mut cmd = Command::new(&stage.program);
        cmd.args(&stage.args).stdout(Stdio::piped()).stderr(Stdio::piped());
        match upstream.take() {
            Some(out) => {
                cmd.stdin(Stdio::from(out));
            }
            None if stdin.is_some() => {
                cmd.stdin(Stdio::piped());
            }
            None => {
                cmd.stdin(Stdio::null());
            }
        }
        let spawned = cmd.spawn();
        // Releases the parent's copy of the upstream pipe end.
        drop(cmd);
        let mut child = match spawned {
            Ok(c) => c,
            Err(source) => {
                kill_all(&mut children);
                return Err(RunError::Launch {
                    stage: i,
                    tool: stage.tool.clone(),
                    executable: stage.program.clone(),
                    source,
                });
            }
        };
        if i == 0 {
            if let (Some(data), Some(mut pipe)) = (stdin.as_ref(), child.stdin.take()) {
                let data = data.clone();
                // A stage may exit without reading everything; the broken
                // pipe is not an error of the run.
                writer = Some(thread::spawn(move || {
                    let _ = pipe.write_all(&data);
                }));
            }
        }
        errs.push(drain(child.stderr.take().expect("stderr piped")));
        upstream = child.stdout.take();
        children.push(child);
    }
    let out = drain(upstream.take().expect("stdout piped"));

    let mut statuses: Vec<Option<ExitStatus>> = vec![None; children.len()];
    loop {
        for (i, c) in children.iter_mut().enumerate() {
            if statuses[i].is_none() {
                if let Ok(Some(s)) = c.try_wait() {
                    statuses[i] = Some(s);
                }
            }
        }
        if statuses.iter().all(Option::is_some) {
            break;
        }
        if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            // Reader threads are left to finish on their own: a grandchild
            // may still hold a pipe open.
            kill_all(&mut children);
            return Err(RunError::Cancelled);
        }
        if start.elapsed() >= timeout {
            kill_all(&mut children);
            return Err(RunError::Timeout(timeout));
        }
        thread::sleep(POLL);
    }
    if let Some(w) = writer {
        let _ = w.join();
    }
    let stdout = out.join().unwrap_or_default();
    let stderr = errs.into_iter().map(|h| h.join().unwrap_or_default()).collect();
    Ok(PipeOutput {
        statuses: statuses.into_iter().map(|s| s.expect("all exited")).collect(),
        stdout,
        stderr,
        duration: start.elapsed(),
    })
}

fn read_inputs(launch: &LaunchConfiguration) -> Result<Vec<u8>, RunError> {
    let mut buf = Vec::new();
    for path in &launch.input_files {
        let data = std::fs::read(path).map_err(|source| RunError::Input {
            path: path.clone(),
            source,
        })?;
        buf.extend_from_slice(&data);
        if !data.is_empty() && !data.ends_with(b"\n") {
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

pub fn default_format(kind: ToolKind) -> OutputFormat {
    match kind {
        ToolKind::Dlv => OutputFormat::DlvLike,
        _ => OutputFormat::ClaspLike,
    }
}

/// Executes a launch configuration against `registry`.
///
/// Extra arguments go to the last stage, the one producing the answer sets.
pub fn run(
    registry: &Registry,
    launch: &LaunchConfiguration,
    cancel: Option<&Cancel>,
) -> Result<RunResult, RunError> {
    if launch.input_files.is_empty() {
        return Err(RegistryError::Invalid {
            id: launch.id.clone(),
            message: "a launch needs at least one input file".into(),
        }
        .into());
    }
    let tools = registry.stages_of(&launch.tool)?;
    let mut specs: Vec<StageSpec> = tools
        .iter()
        .map(|t| StageSpec {
            tool: t.id.clone(),
            program: t.executable_path.clone(),
            args: t.default_args.clone(),
        })
        .collect();
    let last = specs.len() - 1;
    specs[last].args.extend(launch.extra_args.iter().cloned());
    let stdin = match tools[0].input_mode() {
        InputMode::Stdin => Some(read_inputs(launch)?),
        InputMode::Arguments => {
            for path in &launch.input_files {
                if let Err(source) = std::fs::metadata(path) {
                    return Err(RunError::Input {
                        path: path.clone(),
                        source,
                    });
                }
                specs[0].args.push(path.display().to_string());
            }
            None
        }
    };

    let piped = run_stages(&specs, stdin, launch.timeout(), cancel)?;
    let raw_output = String::from_utf8_lossy(&piped.stdout).into_owned();
    let raw_errors = piped
        .stderr
        .iter()
        .map(|e| String::from_utf8_lossy(e))
        .collect::<Vec<_>>()
        .concat();
    if raw_output.trim().is_empty() {
        if let Some((stage, status)) = piped.statuses.iter().enumerate().find(|(_, s)| !s.success()) {
            return Err(RunError::ToolFailure {
                stage,
                tool: specs[stage].tool.clone(),
                status: status.to_string(),
                raw_errors,
            });
        }
    }
    let mut result = RunResult {
        exit_codes: piped.statuses.iter().map(ExitStatus::code).collect(),
        raw_output,
        raw_errors,
        interpretations: Vec::new(),
        satisfiable: None,
        duration_ms: piped.duration.as_millis() as u64,
    };
    if launch.output_mode == OutputMode::ParseInterpretations {
        let format = launch.format.unwrap_or_else(|| default_format(tools[last].kind));
        let parsed = parse_solver_output(&result.raw_output, format)?;
        result.satisfiable = Some(parsed.satisfiable);
        if parsed.satisfiable {
            result.interpretations = parsed.interpretations;
        }
    }
    Ok(result)
}
