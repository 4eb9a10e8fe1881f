//! Running visualization programs.

use std::ops::ControlFlow;

use aspwb_core::engine::{enumerate, ground, SolveOptions};
use aspwb_core::{parse, Dialect, Interpretation, Program};

use crate::vocab::VisAtomSet;
use crate::VizError;

/// Anything that can enumerate answer sets of a program.
pub trait AnswerSetSolver {
    /// Calls `visit` with each answer set, in a deterministic order, until
    /// it returns `Break` or the answer sets run out.
    fn answer_sets(
        &self,
        program: &Program,
        visit: &mut dyn FnMut(Interpretation) -> ControlFlow<()>,
    ) -> Result<(), VizError>;
}

/// The built-in grounder and solver.
#[derive(Debug, Clone, Default)]
pub struct InternalSolver {
    pub options: SolveOptions,
}

impl AnswerSetSolver for InternalSolver {
    fn answer_sets(
        &self,
        program: &Program,
        visit: &mut dyn FnMut(Interpretation) -> ControlFlow<()>,
    ) -> Result<(), VizError> {
        let g = ground(program, self.options.limits)?;
        enumerate(&g, &self.options, visit)?;
        Ok(())
    }
}

/// Parses a visualization program, failing on any error diagnostic.
pub fn parse_vis_program(text: &str, dialect: Dialect) -> Result<Program, VizError> {
    let r = parse(text, dialect);
    if r.has_errors() {
        return Err(VizError::Parse(r.diagnostics.into_iter().filter(|d| d.is_error()).collect()));
    }
    Ok(r.program)
}

/// Solves the visualization program together with the interpretation as
/// facts and returns the vocabulary atoms of the first answer set.
pub fn eval_vis_program(
    vis_program: &Program,
    interpretation: &Interpretation,
    solver: &dyn AnswerSetSolver,
) -> Result<VisAtomSet, VizError> {
    let mut program = vis_program.clone();
    program.add_facts(interpretation);
    let mut first = None;
    solver.answer_sets(&program, &mut |i| {
        first = Some(i);
        ControlFlow::Break(())
    })?;
    VisAtomSet::project(&first.ok_or(VizError::Unsat)?)
}
