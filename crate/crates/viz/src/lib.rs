//! Visualization of interpretations and abduction of interpretations from
//! edited visualizations.
//!
//! The forward direction evaluates a visualization program over an
//! interpretation, keeps the atoms of the `vis*` vocabulary, and turns them
//! into a [`Scene`]. The backward direction takes edited vocabulary atoms and
//! searches for an interpretation that visualizes to exactly those atoms.

mod abduce;
mod build;
mod edit;
mod error;
mod generic;
mod layout;
mod scene;
mod solver;
mod svg;
pub mod vocab;

pub use abduce::{abduce, lambda, AbductionProblem};
pub use build::build_scene;
pub use edit::{apply_edit, apply_edits, CellRef, Edit, ElementSpec, ShapeSpec};
pub use error::VizError;
pub use generic::{generic_scene, is_hub, is_node, PALETTE};
pub use layout::{force_layout, LAYOUT_ITERATIONS, LAYOUT_SEED};
pub use scene::{Canvas, ElementKind, Geometry, Parent, Scene, SceneElement, Style};
pub use solver::{eval_vis_program, parse_vis_program, AnswerSetSolver, InternalSolver};
pub use svg::export_svg;
pub use vocab::VisAtomSet;

/// Draws an N×N board with one disc per queen. The board size is taken
/// from the interpretation, so the program works for any N.
pub const QUEENS_VIS: &str = include_str!("../programs/queens_vis.lp");
