//! Semantic services over parsed programs.

mod occurrences;
mod outline;
mod safety;

pub use occurrences::{occurrences_at, OccurrenceSet, Scope, Subject};
pub use outline::{build_outline, OutlineKind, OutlineNode, LABEL_WIDTH};
pub use safety::{
    bound_variables, check_assignments, check_safety, unsafe_variables, CONST_ASSIGNMENT_LHS,
    UNSAFE_VARIABLE,
};

use crate::model::Program;
use crate::parse::Diagnostic;

/// All semantic checks, in source order.
pub fn lint(program: &Program) -> Vec<Diagnostic> {
    let mut out = check_safety(program);
    out.extend(check_assignments(program));
    out.sort_by_key(|d| d.span.start_byte);
    out
}
