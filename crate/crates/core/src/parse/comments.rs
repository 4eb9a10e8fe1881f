//! Comment attachment and `%!` meta-commands.
//!
//! A comment trails the rule that ends before it on the same line. Otherwise
//! it leads the next rule, as long as nothing but blank lines (at most one)
//! and other comments separate them. Everything else is standalone.
//! `name` meta-commands always belong to the rule they name.

use crate::model::{Comment, CommentKind, MetaCommand, MetaKind, Rule};

use super::lexer::Token;
use super::{codes, Diagnostic};

const MAX_BLANK_LINES: usize = 1;

pub fn attach_comments(
    source: &str,
    tokens: &[Token],
    comments: &[Comment],
    rules: &[Rule],
) -> Vec<Option<usize>> {
    let token_between = |from: usize, to: usize| {
        let i = tokens.partition_point(|t| t.start < from);
        tokens.get(i).is_some_and(|t| t.start < to)
    };
    comments
        .iter()
        .map(|c| {
            // name commands travel with the rule they name
            if meta_name(&c.text).is_some() {
                return rules.iter().position(|r| r.span.start_byte >= c.span.end_byte);
            }
            let trailing = rules.iter().rposition(|r| {
                r.span.end_line == c.span.start_line
                    && r.span.end_byte <= c.span.start_byte
            });
            if let Some(i) = trailing {
                if !token_between(rules[i].span.end_byte, c.span.start_byte) {
                    return Some(i);
                }
            }
            let next = rules.iter().position(|r| r.span.start_byte >= c.span.end_byte)?;
            let rule = &rules[next];
            if token_between(c.span.end_byte, rule.span.start_byte) {
                return None;
            }
            let blanks = blank_lines(
                source,
                comments,
                c.span.end_byte,
                rule.span.start_byte,
            );
            (blanks <= MAX_BLANK_LINES).then_some(next)
        })
        .collect()
}

/// Whitespace-only lines strictly inside `from..to` that no comment covers.
fn blank_lines(source: &str, comments: &[Comment], from: usize, to: usize) -> usize {
    let gap = &source[from..to];
    let mut count = 0;
    let mut offset = from;
    let lines: Vec<&str> = gap.split('\n').collect();
    for (i, line) in lines.iter().enumerate() {
        let line_start = offset;
        offset += line.len() + 1;
        // first and last pieces share a line with the comment or the rule
        if i == 0 || i == lines.len() - 1 {
            continue;
        }
        if !line.trim().is_empty() {
            continue;
        }
        let covered = comments
            .iter()
            .any(|c| c.span.start_byte <= line_start && line_start < c.span.end_byte);
        if !covered {
            count += 1;
        }
    }
    count
}

fn meta_payload(text: &str, kind: CommentKind) -> Option<&str> {
    match kind {
        CommentKind::Line => text.strip_prefix("%!"),
        CommentKind::Block => text
            .strip_prefix("%*!")
            .map(|t| t.strip_suffix("*%").unwrap_or(t)),
    }
    .map(str::trim)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

enum Parsed {
    Name(String),
    Unknown(String),
    Malformed,
}

fn parse_command(payload: &str) -> Parsed {
    let Some(open) = payload.find('(') else {
        return if is_ident(payload) {
            Parsed::Unknown(payload.to_string())
        } else {
            Parsed::Malformed
        };
    };
    let command = payload[..open].trim();
    let Some(arg) = payload[open + 1..].strip_suffix(')') else {
        return Parsed::Malformed;
    };
    let arg = arg.trim();
    match command {
        "name" if is_ident(arg) => Parsed::Name(arg.to_string()),
        "name" => Parsed::Malformed,
        c if is_ident(c) => Parsed::Unknown(c.to_string()),
        _ => Parsed::Malformed,
    }
}

/// The rule name carried by a `%! name(n)` comment, if `text` is one.
pub fn meta_name(text: &str) -> Option<String> {
    let kind = if text.starts_with("%*") {
        CommentKind::Block
    } else {
        CommentKind::Line
    };
    match parse_command(meta_payload(text, kind)?) {
        Parsed::Name(n) => Some(n),
        _ => None,
    }
}

pub fn parse_meta(comments: &[Comment], rules: &[Rule]) -> (Vec<MetaCommand>, Vec<Diagnostic>) {
    let mut metas = Vec::new();
    let mut diags = Vec::new();
    for c in comments {
        let Some(payload) = meta_payload(&c.text, c.kind) else {
            continue;
        };
        match parse_command(payload) {
            Parsed::Name(name) => {
                let target = rules.iter().position(|r| r.span.start_byte >= c.span.end_byte);
                if target.is_none() {
                    diags.push(Diagnostic::warning(
                        codes::META_NO_TARGET,
                        format!("meta-command `name({name})` is not followed by a rule"),
                        c.span.clone(),
                    ));
                }
                metas.push(MetaCommand {
                    kind: MetaKind::Name,
                    payload: name,
                    target,
                    span: c.span.clone(),
                });
            }
            Parsed::Unknown(cmd) => diags.push(Diagnostic::warning(
                codes::META_UNKNOWN_COMMAND,
                format!("unknown meta-command `{cmd}`"),
                c.span.clone(),
            )),
            Parsed::Malformed => diags.push(Diagnostic::warning(
                codes::META_MALFORMED,
                format!("malformed meta-command `{payload}`"),
                c.span.clone(),
            )),
        }
    }
    (metas, diags)
}
