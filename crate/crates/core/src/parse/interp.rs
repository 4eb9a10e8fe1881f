//! Reading ground literals and interpretations from text.
//!
//! Accepts the loose formats solvers and users produce: optional braces,
//! literals separated by commas, whitespace, or full stops.

use thiserror::Error;

use crate::model::{Dialect, GroundLiteral, Interpretation, ModelError, StandardLiteral, Value};
use crate::span::LineIndex;

use super::lexer::{lex, TokenKind};
use super::parser::{literal_at, parse_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpretationError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { message: String, offset: usize },
    #[error("literal `{0}` is not ground")]
    NonGround(String),
    #[error("interpretation contains both `{0}` and its complement")]
    Inconsistent(String),
}

fn ground(lit: &StandardLiteral) -> Result<GroundLiteral, String> {
    let args = lit
        .args
        .iter()
        .map(|t| {
            if !t.is_ground() || t.contains_interval() {
                return Err(t.to_string());
            }
            t.eval().map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<Value>, _>>()?;
    Ok(GroundLiteral {
        strong_negation: lit.strong_negation,
        predicate: lit.predicate.clone(),
        args,
    })
}

pub fn parse_interpretation(
    text: &str,
    dialect: Dialect,
) -> Result<Interpretation, InterpretationError> {
    let lexed = lex(text, dialect);
    let tokens = &lexed.tokens;
    let index = LineIndex::new("", text);
    let mut pos = 0;
    let mut end = tokens.len();
    if tokens.first().map(|t| &t.kind) == Some(&TokenKind::LBrace) {
        if tokens.last().map(|t| &t.kind) != Some(&TokenKind::RBrace) {
            return Err(InterpretationError::Syntax {
                message: "missing `}`".into(),
                offset: text.len(),
            });
        }
        pos = 1;
        end -= 1;
    }
    let body = &tokens[..end];
    let mut out = Interpretation::new();
    while pos < end {
        if matches!(body[pos].kind, TokenKind::Comma | TokenKind::Dot) {
            pos += 1;
            continue;
        }
        let (lit, next) = literal_at(text, &index, dialect, body, pos)
            .map_err(|(message, offset)| InterpretationError::Syntax { message, offset })?;
        let g = ground(&lit).map_err(|_| {
            InterpretationError::NonGround(text[body[pos].start..body[next - 1].end].to_string())
        })?;
        out.insert(g).map_err(|e| match e {
            ModelError::Inconsistent(l) => InterpretationError::Inconsistent(l.to_string()),
            other => InterpretationError::Syntax {
                message: other.to_string(),
                offset: body[pos].start,
            },
        })?;
        pos = next;
    }
    Ok(out)
}

pub fn parse_ground_term(text: &str) -> Result<Value, String> {
    let t = parse_term(text.trim(), Dialect::Gringo)?;
    if !t.is_ground() || t.contains_interval() {
        return Err(format!("`{text}` is not a ground term"));
    }
    t.eval().map_err(|e| e.to_string())
}

pub fn parse_ground_literal(text: &str) -> Result<GroundLiteral, String> {
    let text = text.trim();
    let lexed = lex(text, Dialect::Gringo);
    let index = LineIndex::new("", text);
    let (lit, next) = literal_at(text, &index, Dialect::Gringo, &lexed.tokens, 0)
        .map_err(|(m, _)| m)?;
    if next != lexed.tokens.len() {
        return Err(format!("unexpected input after literal in `{text}`"));
    }
    ground(&lit).map_err(|t| format!("`{t}` is not a ground term"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let a = parse_interpretation("{q(1), -r(a,\"s\"), p}", Dialect::Gringo).unwrap();
        let b = parse_interpretation("p q(1) -r(a,\"s\")", Dialect::Dlv).unwrap();
        let c = parse_interpretation("p. q(1). -r(a,\"s\").", Dialect::Gringo).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.len(), 3);
        assert!(parse_interpretation("{}", Dialect::Gringo).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_interpretation("p(X)", Dialect::Gringo),
            Err(InterpretationError::NonGround(_))
        ));
        assert!(matches!(
            parse_interpretation("p, -p", Dialect::Gringo),
            Err(InterpretationError::Inconsistent(_))
        ));
        assert!(matches!(
            parse_interpretation("p(", Dialect::Gringo),
            Err(InterpretationError::Syntax { .. })
        ));
    }

    #[test]
    fn ground_round_trip() {
        for s in ["f(1,g(a))", "-3", "\"a b\"", "c"] {
            assert_eq!(parse_ground_term(s).unwrap().to_string(), s);
        }
        let l = parse_ground_literal("-p(1,x)").unwrap();
        assert!(l.strong_negation);
        assert_eq!(l.to_string(), "-p(1,x)");
        assert_eq!(parse_ground_term("2+3").unwrap(), Value::Integer(5));
    }
}
