//! Program model, parser, static analysis, and a small answer-set engine for
//! Gringo and DLV logic programs.

pub mod analysis;
pub mod engine;
pub mod interp;
pub mod model;
pub mod parse;
pub mod span;

pub use model::*;
pub use parse::{parse, parse_named, Diagnostic, ParseResult, Severity};
pub use span::{LineIndex, Position, SourceSpan};
