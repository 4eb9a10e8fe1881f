//! Error-tolerant parsing for the Gringo and DLV dialects.
//!
//! The source is cut into statements at `.` tokens. Each statement is parsed
//! independently; a statement that fails yields exactly one error diagnostic
//! and is dropped, so a broken rule never hides the rules after it.

mod comments;
mod interp;
mod lexer;
mod parser;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Dialect, Program};
use crate::span::{LineIndex, SourceSpan};

pub use comments::{attach_comments, meta_name, parse_meta};
pub use interp::{parse_ground_literal, parse_ground_term, parse_interpretation, InterpretationError};
pub use lexer::{lex, Lexed, RawComment, Token, TokenKind};
pub use parser::parse_term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        code: &str,
        message: impl Into<String>,
        span: SourceSpan,
    ) -> Self {
        Self {
            severity,
            code: code.to_string(),
            message: message.into(),
            span,
        }
    }

    pub fn error(code: &str, message: impl Into<String>, span: SourceSpan) -> Self {
        Self::new(Severity::Error, code, message, span)
    }

    pub fn warning(code: &str, message: impl Into<String>, span: SourceSpan) -> Self {
        Self::new(Severity::Warning, code, message, span)
    }

    pub fn info(code: &str, message: impl Into<String>, span: SourceSpan) -> Self {
        Self::new(Severity::Info, code, message, span)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}[{}]: {}",
            self.span, self.severity, self.code, self.message
        )
    }
}

/// Stable diagnostic codes emitted by the parser.
pub mod codes {
    pub const SYNTAX_ERROR: &str = "syntax-error";
    pub const UNTERMINATED_RULE: &str = "unterminated-rule";
    pub const UNTERMINATED_COMMENT: &str = "unterminated-comment";
    pub const CONST_SKIPPED: &str = "const-skipped";
    pub const UNSUPPORTED_STATEMENT: &str = "unsupported-statement";
    pub const DIALECT_MISMATCH: &str = "dialect-mismatch";
    pub const META_UNKNOWN_COMMAND: &str = "meta-unknown-command";
    pub const META_MALFORMED: &str = "meta-malformed";
    pub const META_NO_TARGET: &str = "meta-no-target";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseResult {
    pub program: Program,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot infer a dialect from `{0}`")]
pub struct UnknownDialect(pub String);

/// Dialect implied by a file extension.
pub fn detect_dialect(path: impl AsRef<Path>) -> Result<Dialect, UnknownDialect> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("lp" | "lparse" | "gr" | "gringo") => Ok(Dialect::Gringo),
        Some("dlv" | "dl") => Ok(Dialect::Dlv),
        _ => Err(UnknownDialect(path.display().to_string())),
    }
}

pub fn parse(source: &str, dialect: Dialect) -> ParseResult {
    parse_named("", source, dialect)
}

/// Parses `source`, recording `file` in every span.
pub fn parse_named(file: &str, source: &str, dialect: Dialect) -> ParseResult {
    let index = LineIndex::new(file, source);
    let lexed = lex(source, dialect);
    let mut diagnostics = Vec::new();

    let mut program = Program::new(dialect);
    program.source = source.to_string();
    program.rules = parser::parse_statements(source, &index, dialect, &lexed.tokens, &mut diagnostics);

    let mut comments: Vec<crate::model::Comment> = lexed
        .comments
        .iter()
        .map(|c| {
            let span = index.span(source, c.start, c.end);
            if !c.terminated {
                diagnostics.push(Diagnostic::warning(
                    codes::UNTERMINATED_COMMENT,
                    "block comment is not closed with `*%`",
                    span.clone(),
                ));
            }
            crate::model::Comment {
                text: c.text.clone(),
                kind: if c.block {
                    crate::model::CommentKind::Block
                } else {
                    crate::model::CommentKind::Line
                },
                span,
                attached_to: None,
            }
        })
        .collect();

    let (metas, meta_diags) = parse_meta(&comments, &program.rules);
    diagnostics.extend(meta_diags);
    for m in &metas {
        if let Some(t) = m.target {
            program.rules[t].name = Some(m.payload.clone());
        }
    }
    program.meta_commands = metas;

    let attachments = attach_comments(source, &lexed.tokens, &comments, &program.rules);
    for (comment, target) in comments.iter_mut().zip(attachments) {
        comment.attached_to = target;
    }
    for comment in comments {
        match comment.attached_to {
            Some(i) => program.rules[i].comments.push(comment),
            None => program.standalone_comments.push(comment),
        }
    }

    diagnostics.sort_by_key(|d| d.span.start_byte);
    ParseResult {
        program,
        diagnostics,
    }
}
