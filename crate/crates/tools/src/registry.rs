//! Tool, pipeline and launch configurations, persisted as TOML.
//!
//! Tools and pipelines share one id namespace since a launch may refer to
//! either. Launch ids live in their own namespace.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{RwLock, RwLockReadGuard};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TIMEOUT_SECS: u64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToolKind {
    Gringo,
    Clasp,
    Dlv,
    Generic,
}

/// How a first pipeline stage receives the launch's input files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    /// File contents concatenated on standard input.
    Stdin,
    /// File paths appended to the command line.
    Arguments,
}

impl ToolKind {
    pub fn default_input_mode(self) -> InputMode {
        match self {
            ToolKind::Dlv => InputMode::Arguments,
            _ => InputMode::Stdin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolConfiguration {
    #[serde(skip)]
    pub id: String,
    pub executable_path: PathBuf,
    #[serde(default)]
    pub default_args: Vec<String>,
    pub kind: ToolKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_mode: Option<InputMode>,
}

impl ToolConfiguration {
    pub fn new(id: impl Into<String>, executable_path: impl Into<PathBuf>, kind: ToolKind) -> Self {
        Self {
            id: id.into(),
            executable_path: executable_path.into(),
            default_args: Vec::new(),
            kind,
            input_mode: None,
        }
    }

    pub fn with_args<I, S>(mut self, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.default_args = args.into_iter().map(Into::into).collect();
        self
    }

    pub fn input_mode(&self) -> InputMode {
        self.input_mode.unwrap_or_else(|| self.kind.default_input_mode())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pipeline {
    #[serde(skip)]
    pub id: String,
    pub stages: Vec<String>,
}

impl Pipeline {
    pub fn new<I, S>(id: impl Into<String>, stages: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            id: id.into(),
            stages: stages.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    #[default]
    Raw,
    ParseInterpretations,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaunchConfiguration {
    #[serde(skip)]
    pub id: String,
    pub input_files: Vec<PathBuf>,
    /// A tool or pipeline id.
    pub tool: String,
    #[serde(default)]
    pub extra_args: Vec<String>,
    #[serde(default)]
    pub output_mode: OutputMode,
    /// Overrides the format implied by the last stage's kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<crate::OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeout_secs: Option<u64>,
}

impl LaunchConfiguration {
    pub fn new<I, P>(id: impl Into<String>, tool: impl Into<String>, input_files: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PathBuf>,
    {
        Self {
            id: id.into(),
            input_files: input_files.into_iter().map(Into::into).collect(),
            tool: tool.into(),
            extra_args: Vec::new(),
            output_mode: OutputMode::Raw,
            format: None,
            timeout_secs: None,
        }
    }

    pub fn timeout(&self) -> std::time::Duration {
        std::time::Duration::from_secs(self.timeout_secs.unwrap_or(DEFAULT_TIMEOUT_SECS))
    }
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("id `{0}` is already in use")]
    Duplicate(String),
    #[error("no entry with id `{0}`")]
    NotFound(String),
    #[error("`{id}` is referenced by `{referenced_by}`")]
    Integrity { id: String, referenced_by: String },
    #[error("invalid configuration `{id}`: {message}")]
    Invalid { id: String, message: String },
    #[error("registry file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("registry file {path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl RegistryError {
    pub fn code(&self) -> &'static str {
        match self {
            RegistryError::Duplicate(_) => "duplicate-id",
            RegistryError::NotFound(_) => "not-found",
            RegistryError::Integrity { .. } => "integrity-error",
            RegistryError::Invalid { .. } => "invalid-configuration",
            RegistryError::Io { .. } | RegistryError::Format { .. } => "registry-io",
        }
    }
}

fn invalid(id: &str, message: impl Into<String>) -> RegistryError {
    RegistryError::Invalid {
        id: id.to_string(),
        message: message.into(),
    }
}

/// What a launch's `tool` field resolves to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target<'a> {
    Tool(&'a ToolConfiguration),
    Pipeline(&'a Pipeline),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registry {
    #[serde(default)]
    tools: BTreeMap<String, ToolConfiguration>,
    #[serde(default)]
    pipelines: BTreeMap<String, Pipeline>,
    #[serde(default)]
    launches: BTreeMap<String, LaunchConfiguration>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.tools.is_empty() && self.pipelines.is_empty() && self.launches.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tools.len() + self.pipelines.len() + self.launches.len()
    }

    pub fn tools(&self) -> impl Iterator<Item = &ToolConfiguration> {
        self.tools.values()
    }

    pub fn pipelines(&self) -> impl Iterator<Item = &Pipeline> {
        self.pipelines.values()
    }

    pub fn launches(&self) -> impl Iterator<Item = &LaunchConfiguration> {
        self.launches.values()
    }

    pub fn tool(&self, id: &str) -> Option<&ToolConfiguration> {
        self.tools.get(id)
    }

    pub fn pipeline(&self, id: &str) -> Option<&Pipeline> {
        self.pipelines.get(id)
    }

    pub fn launch(&self, id: &str) -> Option<&LaunchConfiguration> {
        self.launches.get(id)
    }

    pub fn target(&self, id: &str) -> Option<Target<'_>> {
        self.tools
            .get(id)
            .map(Target::Tool)
            .or_else(|| self.pipelines.get(id).map(Target::Pipeline))
    }

    /// The tools a launch runs, in pipe order.
    pub fn stages_of(&self, id: &str) -> Result<Vec<&ToolConfiguration>, RegistryError> {
        match self.target(id) {
            Some(Target::Tool(t)) => Ok(vec![t]),
            Some(Target::Pipeline(p)) => p
                .stages
                .iter()
                .map(|s| self.tools.get(s).ok_or_else(|| RegistryError::NotFound(s.clone())))
                .collect(),
            None => Err(RegistryError::NotFound(id.to_string())),
        }
    }

    fn check_tool(t: &ToolConfiguration) -> Result<(), RegistryError> {
        if t.id.trim().is_empty() {
            return Err(invalid(&t.id, "empty id"));
        }
        if t.executable_path.as_os_str().is_empty() {
            return Err(invalid(&t.id, "empty executable path"));
        }
        Ok(())
    }

    fn check_pipeline(&self, p: &Pipeline) -> Result<(), RegistryError> {
        if p.id.trim().is_empty() {
            return Err(invalid(&p.id, "empty id"));
        }
        if p.stages.is_empty() {
            return Err(invalid(&p.id, "a pipeline needs at least one stage"));
        }
        for s in &p.stages {
            if !self.tools.contains_key(s) {
                return Err(invalid(&p.id, format!("unknown tool `{s}`")));
            }
        }
        Ok(())
    }

    fn check_launch(&self, l: &LaunchConfiguration) -> Result<(), RegistryError> {
        if l.id.trim().is_empty() {
            return Err(invalid(&l.id, "empty id"));
        }
        if l.input_files.is_empty() {
            return Err(invalid(&l.id, "a launch needs at least one input file"));
        }
        if self.target(&l.tool).is_none() {
            return Err(invalid(&l.id, format!("unknown tool or pipeline `{}`", l.tool)));
        }
        Ok(())
    }

    fn tool_namespace_taken(&self, id: &str) -> bool {
        self.tools.contains_key(id) || self.pipelines.contains_key(id)
    }

    pub fn add_tool(&mut self, tool: ToolConfiguration) -> Result<(), RegistryError> {
        Self::check_tool(&tool)?;
        if self.tool_namespace_taken(&tool.id) {
            return Err(RegistryError::Duplicate(tool.id));
        }
        self.tools.insert(tool.id.clone(), tool);
        Ok(())
    }

    pub fn update_tool(&mut self, tool: ToolConfiguration) -> Result<(), RegistryError> {
        Self::check_tool(&tool)?;
        match self.tools.get_mut(&tool.id) {
            Some(slot) => {
                *slot = tool;
                Ok(())
            }
            None => Err(RegistryError::NotFound(tool.id)),
        }
    }

    pub fn remove_tool(&mut self, id: &str) -> Result<ToolConfiguration, RegistryError> {
        if !self.tools.contains_key(id) {
            return Err(RegistryError::NotFound(id.to_string()));
        }
        if let Some(p) = self.pipelines.values().find(|p| p.stages.iter().any(|s| s == id)) {
            return Err(RegistryError::Integrity {
                id: id.to_string(),
                referenced_by: p.id.clone(),
            });
        }
        self.check_unlaunched(id)?;
        Ok(self.tools.remove(id).expect("checked above"))
    }

    pub fn add_pipeline(&mut self, pipeline: Pipeline) -> Result<(), RegistryError> {
        self.check_pipeline(&pipeline)?;
        if self.tool_namespace_taken(&pipeline.id) {
            return Err(RegistryError::Duplicate(pipeline.id));
        }
        self.pipelines.insert(pipeline.id.clone(), pipeline);
        Ok(())
    }

    pub fn update_pipeline(&mut self, pipeline: Pipeline) -> Result<(), RegistryError> {
        if !self.pipelines.contains_key(&pipeline.id) {
            return Err(RegistryError::NotFound(pipeline.id));
        }
        self.check_pipeline(&pipeline)?;
        self.pipelines.insert(pipeline.id.clone(), pipeline);
        Ok(())
    }

    pub fn remove_pipeline(&mut self, id: &str) -> Result<Pipeline, RegistryError> {
        if !self.pipelines.contains_key(id) {
            return Err(RegistryError::NotFound(id.to_string()));
        }
        self.check_unlaunched(id)?;
        Ok(self.pipelines.remove(id).expect("checked above"))
    }

    fn check_unlaunched(&self, id: &str) -> Result<(), RegistryError> {
        match self.launches.values().find(|l| l.tool == id) {
            Some(l) => Err(RegistryError::Integrity {
                id: id.to_string(),
                referenced_by: l.id.clone(),
            }),
            None => Ok(()),
        }
    }

    pub fn add_launch(&mut self, launch: LaunchConfiguration) -> Result<(), RegistryError> {
        self.check_launch(&launch)?;
        if self.launches.contains_key(&launch.id) {
            return Err(RegistryError::Duplicate(launch.id));
        }
        self.launches.insert(launch.id.clone(), launch);
        Ok(())
    }

    pub fn update_launch(&mut self, launch: LaunchConfiguration) -> Result<(), RegistryError> {
        if !self.launches.contains_key(&launch.id) {
            return Err(RegistryError::NotFound(launch.id));
        }
        self.check_launch(&launch)?;
        self.launches.insert(launch.id.clone(), launch);
        Ok(())
    }

    pub fn remove_launch(&mut self, id: &str) -> Result<LaunchConfiguration, RegistryError> {
        self.launches
            .remove(id)
            .ok_or_else(|| RegistryError::NotFound(id.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("registry serialises")
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        let mut r: Registry = toml::from_str(text).map_err(|e| e.to_string())?;
        for (k, v) in r.tools.iter_mut() {
            v.id = k.clone();
        }
        for (k, v) in r.pipelines.iter_mut() {
            v.id = k.clone();
        }
        for (k, v) in r.launches.iter_mut() {
            v.id = k.clone();
        }
        let dup = r.tools.keys().find(|k| r.pipelines.contains_key(*k)).cloned();
        if let Some(id) = dup {
            return Err(format!("id `{id}` names both a tool and a pipeline"));
        }
        for t in r.tools.values() {
            Self::check_tool(t).map_err(|e| e.to_string())?;
        }
        for p in r.pipelines.values() {
            r.check_pipeline(p).map_err(|e| e.to_string())?;
        }
        for l in r.launches.values() {
            r.check_launch(l).map_err(|e| e.to_string())?;
        }
        Ok(r)
    }

    /// Reads a registry file. A missing file is an empty registry.
    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::new()),
            Err(source) => {
                return Err(RegistryError::Io {
                    path: path.to_path_buf(),
                    source,
                })
            }
        };
        Self::from_toml(&text).map_err(|message| RegistryError::Format {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Writes via a temporary file in the same directory and a rename, so
    /// readers see either the old or the new file.
    pub fn save(&self, path: &Path) -> Result<(), RegistryError> {
        let io = |source| RegistryError::Io {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(self.to_toml().as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        Ok(())
    }
}

/// A registry bound to its file: many readers, one writer at a time, and
/// every successful mutation persisted before the lock is released.
#[derive(Debug)]
pub struct RegistryStore {
    path: PathBuf,
    inner: RwLock<Registry>,
}

impl RegistryStore {
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, RegistryError> {
        let path = path.into();
        let registry = Registry::load(&path)?;
        Ok(Self {
            path,
            inner: RwLock::new(registry),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn read(&self) -> RwLockReadGuard<'_, Registry> {
        self.inner.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn snapshot(&self) -> Registry {
        self.read().clone()
    }

    /// Applies `f` to a copy; commits and saves only if both succeed.
    pub fn update<T>(
        &self,
        f: impl FnOnce(&mut Registry) -> Result<T, RegistryError>,
    ) -> Result<T, RegistryError> {
        let mut guard = self.inner.write().unwrap_or_else(|e| e.into_inner());
        let mut next = guard.clone();
        let out = f(&mut next)?;
        next.save(&self.path)?;
        *guard = next;
        Ok(out)
    }
}
