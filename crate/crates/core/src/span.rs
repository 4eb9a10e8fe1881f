//! Source positions.
//!
//! Lines and columns are 1-based and columns count characters, not bytes.
//! The end of a span is exclusive: `end_col` points one past the last
//! character. Byte offsets are kept alongside so that callers can slice the
//! original source without recomputing line tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A 1-based line/column position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position {
    pub line: u32,
    pub col: u32,
}

impl Position {
    pub fn new(line: u32, col: u32) -> Self {
        Self { line, col }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
    pub start_byte: usize,
    pub end_byte: usize,
}

impl Default for SourceSpan {
    fn default() -> Self {
        Self {
            file: Arc::from(""),
            start_line: 1,
            start_col: 1,
            end_line: 1,
            end_col: 1,
            start_byte: 0,
            end_byte: 0,
        }
    }
}

impl SourceSpan {
    pub fn start(&self) -> Position {
        Position::new(self.start_line, self.start_col)
    }

    pub fn end(&self) -> Position {
        Position::new(self.end_line, self.end_col)
    }

    /// Whether `pos` lies inside the half-open range `[start, end)`.
    pub fn contains(&self, pos: Position) -> bool {
        self.start() <= pos && pos < self.end()
    }

    /// Whether `other` lies entirely within `self`.
    pub fn encloses(&self, other: &SourceSpan) -> bool {
        self.start_byte <= other.start_byte && other.end_byte <= self.end_byte
    }

    /// Smallest span covering both.
    pub fn cover(&self, other: &SourceSpan) -> SourceSpan {
        let (start, end) = (
            if self.start_byte <= other.start_byte { self } else { other },
            if self.end_byte >= other.end_byte { self } else { other },
        );
        SourceSpan {
            file: self.file.clone(),
            start_line: start.start_line,
            start_col: start.start_col,
            end_line: end.end_line,
            end_col: end.end_col,
            start_byte: start.start_byte,
            end_byte: end.end_byte,
        }
    }

    pub fn slice<'a>(&self, source: &'a str) -> &'a str {
        &source[self.start_byte..self.end_byte]
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.file.is_empty() {
            write!(f, "{}:", self.file)?;
        }
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

/// Maps byte offsets of one source text to line/column positions.
#[derive(Debug, Clone)]
pub struct LineIndex {
    file: Arc<str>,
    line_starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(file: &str, source: &str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(source.match_indices('\n').map(|(i, _)| i + 1));
        Self {
            file: Arc::from(file),
            line_starts,
        }
    }

    pub fn file(&self) -> &Arc<str> {
        &self.file
    }

    pub fn position(&self, source: &str, byte: usize) -> Position {
        let line = match self.line_starts.binary_search(&byte) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let start = self.line_starts[line];
        let col = source[start..byte].chars().count();
        Position::new(line as u32 + 1, col as u32 + 1)
    }

    /// Byte offset of a position; positions past the end of a line clamp to it.
    pub fn offset(&self, source: &str, pos: Position) -> Option<usize> {
        let line = pos.line.checked_sub(1)? as usize;
        let start = *self.line_starts.get(line)?;
        let end = self
            .line_starts
            .get(line + 1)
            .copied()
            .unwrap_or(source.len());
        let text = &source[start..end];
        let col = pos.col.checked_sub(1)? as usize;
        Some(
            text.char_indices()
                .nth(col)
                .map(|(i, _)| start + i)
                .unwrap_or(end),
        )
    }

    pub fn span(&self, source: &str, start: usize, end: usize) -> SourceSpan {
        let s = self.position(source, start);
        let e = self.position(source, end);
        SourceSpan {
            file: self.file.clone(),
            start_line: s.line,
            start_col: s.col,
            end_line: e.line,
            end_col: e.col,
            start_byte: start,
            end_byte: end,
        }
    }
}
