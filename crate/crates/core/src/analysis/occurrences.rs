use serde::{Deserialize, Serialize};

use crate::model::*;
use crate::span::{Position, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Subject {
    Predicate { signature: PredicateSig },
    Variable { name: String },
    Constant { value: Constant },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Document,
    Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccurrenceSet {
    pub subject: Subject,
    pub spans: Vec<SourceSpan>,
    pub scope: Scope,
}

/// All leaf terms (variables and constants) of a rule, nested ones included.
fn leaf_terms(rule: &Rule) -> Vec<&Term> {
    let mut out = Vec::new();
    for t in rule.terms() {
        t.visit(&mut |t| {
            if matches!(t.kind, TermKind::Variable { .. } | TermKind::Constant(_)) {
                out.push(t);
            }
        });
    }
    out
}

fn sorted(mut spans: Vec<SourceSpan>) -> Vec<SourceSpan> {
    spans.sort_by_key(|s| (s.start_byte, s.end_byte));
    spans.dedup();
    spans
}

/// What the cursor at `pos` points at, and every place it occurs. `None`
/// when the cursor is not on a predicate name, variable, or constant.
pub fn occurrences_at(program: &Program, pos: Position) -> Option<OccurrenceSet> {
    for (ri, rule) in program.rules.iter().enumerate() {
        if !rule.span.contains(pos) {
            continue;
        }
        if let Some(l) = rule
            .standard_literals()
            .into_iter()
            .find(|l| l.predicate_span.contains(pos))
        {
            let sig = l.signature();
            let spans = program
                .rules
                .iter()
                .flat_map(|r| r.standard_literals())
                .filter(|o| o.signature() == sig)
                .map(|o| o.predicate_span.clone())
                .collect();
            return Some(OccurrenceSet {
                subject: Subject::Predicate { signature: sig },
                spans: sorted(spans),
                scope: Scope::Document,
            });
        }
        let term = leaf_terms(rule).into_iter().find(|t| t.span.contains(pos))?;
        return match &term.kind {
            TermKind::Variable { name } if name == "_" => None,
            TermKind::Variable { name } => {
                let spans = leaf_terms(&program.rules[ri])
                    .into_iter()
                    .filter(|t| t.as_variable() == Some(name))
                    .map(|t| t.span.clone())
                    .collect();
                Some(OccurrenceSet {
                    subject: Subject::Variable { name: name.clone() },
                    spans: sorted(spans),
                    scope: Scope::Rule,
                })
            }
            TermKind::Constant(c) => {
                let spans = program
                    .rules
                    .iter()
                    .flat_map(leaf_terms)
                    .filter(|t| t.as_constant() == Some(c))
                    .map(|t| t.span.clone())
                    .collect();
                Some(OccurrenceSet {
                    subject: Subject::Constant { value: c.clone() },
                    spans: sorted(spans),
                    scope: Scope::Document,
                })
            }
            _ => None,
        };
    }
    None
}
