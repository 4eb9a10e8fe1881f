//! Visualization and abduction through an external launch configuration.

use std::io::Write;
use std::ops::ControlFlow;

use aspwb_core::model::pretty_print;
use aspwb_core::{Dialect, Interpretation, Program};
use aspwb_tools::{run, LaunchConfiguration, OutputMode, Registry, ToolKind};
use aspwb_viz::{AnswerSetSolver, VizError};

use crate::error::WbError;

/// Writes each program to a temporary file and runs it through a registered
/// launch, replacing the launch's own input files.
#[derive(Debug, Clone)]
pub struct LaunchSolver {
    registry: Registry,
    launch: LaunchConfiguration,
    dialect: Dialect,
}

impl LaunchSolver {
    pub fn new(registry: Registry, launch: &str) -> Result<Self, WbError> {
        let mut l = registry.launch(launch).cloned().ok_or_else(|| WbError::not_found("launch", launch))?;
        l.output_mode = OutputMode::ParseInterpretations;
        let stages = registry.stages_of(&l.tool)?;
        let dialect = match stages.first().map(|t| t.kind) {
            Some(ToolKind::Dlv) => Dialect::Dlv,
            _ => Dialect::Gringo,
        };
        Ok(Self {
            registry,
            launch: l,
            dialect,
        })
    }
}

impl AnswerSetSolver for LaunchSolver {
    fn answer_sets(
        &self,
        program: &Program,
        visit: &mut dyn FnMut(Interpretation) -> ControlFlow<()>,
    ) -> Result<(), VizError> {
        let text = pretty_print(program, self.dialect).map_err(|e| VizError::Solver(e.to_string()))?;
        let mut file = tempfile::Builder::new()
            .suffix(".lp")
            .tempfile()
            .map_err(|e| VizError::Solver(e.to_string()))?;
        file.write_all(text.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| VizError::Solver(e.to_string()))?;
        let mut launch = self.launch.clone();
        launch.input_files = vec![file.path().to_path_buf()];
        let result = run(&self.registry, &launch, None).map_err(|e| VizError::Solver(e.to_string()))?;
        // external solvers report answer sets in their own order
        let mut sets = result.interpretations;
        sets.sort_by(|a, b| a.literals().cmp(b.literals()));
        for s in sets {
            if visit(s).is_break() {
                break;
            }
        }
        Ok(())
    }
}
