//! External grounders and solvers: configuration registry, piped execution,
//! and parsing of their textual output.

pub mod output;
pub mod registry;
pub mod run;

pub use output::{parse_solver_output, OutputError, OutputFormat, SolverOutput};
pub use registry::{
    InputMode, LaunchConfiguration, OutputMode, Pipeline, Registry, RegistryError, RegistryStore,
    ToolConfiguration, ToolKind, DEFAULT_TIMEOUT_SECS,
};
pub use run::{default_format, run, run_stages, Cancel, PipeOutput, RunError, RunResult, StageSpec};
