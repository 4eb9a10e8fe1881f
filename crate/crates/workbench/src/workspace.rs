//! On-disk state: tool registry, labelled interpretations, and scenes, all
//! under `<root>/.aspwb/`.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use aspwb_core::interp::to_facts;
use aspwb_core::parse::parse_interpretation;
use aspwb_core::{Dialect, Interpretation};
use aspwb_tools::RegistryStore;
use aspwb_viz::{Scene, VisAtomSet};
use serde::{Deserialize, Serialize};

use crate::error::{ErrorKind, WbError};

pub const STATE_DIR: &str = ".aspwb";
pub const REGISTRY_FILE: &str = "tools.toml";
const MAX_LABEL: usize = 64;

pub fn check_label(label: &str) -> Result<(), WbError> {
    let ok = !label.is_empty()
        && label.len() <= MAX_LABEL
        && !label.starts_with('.')
        && label.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(WbError::new(
            ErrorKind::Usage,
            "invalid-label",
            format!("`{label}` is not a valid label (letters, digits, `_`, `-`, `.`; at most {MAX_LABEL})"),
        ))
    }
}

fn write_atomic(path: &Path, data: &[u8]) -> Result<(), WbError> {
    let dir = path.parent().expect("store files live in a directory");
    fs::create_dir_all(dir).map_err(|e| WbError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| WbError::io(dir, e))?;
    tmp.write_all(data).map_err(|e| WbError::io(path, e))?;
    tmp.persist(path).map_err(|e| WbError::io(path, e.error))?;
    Ok(())
}

/// Interpretations stored as fact files, one per label. Writes are
/// serialised; writing an existing label without `overwrite` is a conflict.
#[derive(Debug)]
pub struct InterpretationStore {
    dir: PathBuf,
    lock: Mutex<()>,
}

impl InterpretationStore {
    fn path(&self, label: &str) -> PathBuf {
        self.dir.join(format!("{label}.lp"))
    }

    pub fn labels(&self) -> Result<Vec<String>, WbError> {
        let mut out = BTreeSet::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(WbError::io(&self.dir, e)),
        };
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(label) = name.strip_suffix(".lp") {
                if check_label(label).is_ok() {
                    out.insert(label.to_string());
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    pub fn get(&self, label: &str) -> Result<Interpretation, WbError> {
        check_label(label)?;
        let path = self.path(label);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(WbError::not_found("interpretation", label))
            }
            Err(e) => return Err(WbError::io(&path, e)),
        };
        let i = parse_interpretation(&text, Dialect::Gringo)
            .map_err(|e| WbError::new(ErrorKind::Environment, "corrupt-store", format!("{}: {e}", path.display())))?;
        Ok(i.with_label(label))
    }

    pub fn put(&self, label: &str, interpretation: &Interpretation, overwrite: bool) -> Result<(), WbError> {
        check_label(label)?;
        let facts = to_facts(interpretation.iter(), Dialect::Gringo)
            .map_err(|e| WbError::new(ErrorKind::Usage, "bad-request", e.to_string()))?;
        let path = self.path(label);
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        if !overwrite && path.exists() {
            return Err(WbError::new(
                ErrorKind::Conflict,
                "label-exists",
                format!("interpretation `{label}` already exists"),
            ));
        }
        write_atomic(&path, format!("{facts}\n").as_bytes())
    }

    pub fn remove(&self, label: &str) -> Result<(), WbError> {
        check_label(label)?;
        let path = self.path(label);
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        match fs::remove_file(&path) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(WbError::not_found("interpretation", label)),
            Err(e) => Err(WbError::io(&path, e)),
        }
    }
}

/// A scene together with the vocabulary atoms it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredScene {
    pub scene_id: String,
    pub scene: Scene,
    pub vis_atoms: VisAtomSet,
    /// The interpretation the scene visualizes, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Interpretation>,
}

#[derive(Debug)]
pub struct SceneStore {
    dir: PathBuf,
    lock: Mutex<()>,
}

impl SceneStore {
    fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    pub fn get(&self, id: &str) -> Result<StoredScene, WbError> {
        if !id.chars().all(|c| c.is_ascii_hexdigit()) || id.is_empty() {
            return Err(WbError::not_found("scene", id));
        }
        let path = self.path(id);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(WbError::not_found("scene", id)),
            Err(e) => return Err(WbError::io(&path, e)),
        };
        serde_json::from_str(&text)
            .map_err(|e| WbError::new(ErrorKind::Environment, "corrupt-store", format!("{}: {e}", path.display())))
    }

    /// Scenes are content-addressed, so storing the same scene twice is a
    /// no-op.
    pub fn put(&self, scene: &StoredScene) -> Result<(), WbError> {
        let path = self.path(&scene.scene_id);
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        if path.exists() {
            return Ok(());
        }
        let json = serde_json::to_vec_pretty(scene).expect("scenes serialise");
        write_atomic(&path, &json)
    }
}

#[derive(Debug)]
pub struct Workspace {
    root: PathBuf,
    pub registry: RegistryStore,
    pub interpretations: InterpretationStore,
    pub scenes: SceneStore,
}

impl Workspace {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, WbError> {
        let root = root.into();
        let state = root.join(STATE_DIR);
        let registry = RegistryStore::open(state.join(REGISTRY_FILE))?;
        Ok(Self {
            interpretations: InterpretationStore {
                dir: state.join("interpretations"),
                lock: Mutex::new(()),
            },
            scenes: SceneStore {
                dir: state.join("scenes"),
                lock: Mutex::new(()),
            },
            registry,
            root,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}
