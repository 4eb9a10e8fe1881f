use serde::{Deserialize, Serialize};

use crate::model::*;
use crate::span::{LineIndex, SourceSpan};

pub const LABEL_WIDTH: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutlineKind {
    Program,
    Rule,
    Head,
    Body,
    Literal,
    Predicate,
    Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutlineNode {
    pub label: String,
    pub kind: OutlineKind,
    pub span: SourceSpan,
    pub children: Vec<OutlineNode>,
}

impl OutlineNode {
    fn leaf(label: impl Into<String>, kind: OutlineKind, span: SourceSpan) -> Self {
        Self {
            label: label.into(),
            kind,
            span,
            children: Vec::new(),
        }
    }

    /// Total number of nodes in this subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(OutlineNode::size).sum::<usize>()
    }
}

fn truncate(text: &str) -> String {
    if text.chars().count() <= LABEL_WIDTH {
        text.to_string()
    } else {
        let mut s: String = text.chars().take(LABEL_WIDTH).collect();
        s.push('…');
        s
    }
}

fn rule_label(rule: &Rule, program: &Program) -> String {
    if let Some(name) = &rule.name {
        return name.clone();
    }
    let mut text = String::new();
    if rule_text(rule, &mut text, program.dialect).is_err() {
        text = program
            .source
            .get(rule.span.start_byte..rule.span.end_byte)
            .unwrap_or_default()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
    }
    truncate(&text)
}

fn printed<T: PrettyPrint + ?Sized>(x: &T, dialect: Dialect) -> String {
    pretty_print(x, dialect).unwrap_or_else(|_| pretty_print(x, Dialect::Gringo).unwrap_or_default())
}

fn term_node(t: &Term) -> OutlineNode {
    let mut node = OutlineNode::leaf(t.to_string(), OutlineKind::Term, t.span.clone());
    match &t.kind {
        TermKind::Function { args, .. } => node.children = args.iter().map(term_node).collect(),
        TermKind::Arithmetic { left, right, .. } => {
            node.children = vec![term_node(left), term_node(right)]
        }
        TermKind::Interval { low, high } => node.children = vec![term_node(low), term_node(high)],
        _ => {}
    }
    node
}

fn standard_node(l: &StandardLiteral, dialect: Dialect) -> OutlineNode {
    let mut node = OutlineNode::leaf(printed(l, dialect), OutlineKind::Literal, l.span.clone());
    node.children.push(OutlineNode::leaf(
        l.signature().to_string(),
        OutlineKind::Predicate,
        l.predicate_span.clone(),
    ));
    node.children.extend(l.args.iter().map(term_node));
    node.children
        .extend(l.conditions.iter().map(|c| standard_node(c, dialect)));
    node
}

fn builtin_node(b: &BuiltinLiteral, dialect: Dialect) -> OutlineNode {
    let mut node = OutlineNode::leaf(printed(b, dialect), OutlineKind::Literal, b.span.clone());
    node.children = vec![term_node(&b.left), term_node(&b.right)];
    node
}

fn body_node(b: &BodyLiteral, dialect: Dialect) -> OutlineNode {
    match b {
        BodyLiteral::Standard(l) => standard_node(l, dialect),
        BodyLiteral::Builtin(bl) => builtin_node(bl, dialect),
        BodyLiteral::Aggregate(a) => {
            let mut node =
                OutlineNode::leaf(printed(a, dialect), OutlineKind::Literal, a.span.clone());
            node.children.extend(a.lower_guard.iter().map(|g| term_node(&g.term)));
            for e in &a.elements {
                node.children.extend(e.terms.iter().map(term_node));
                for c in &e.conditions {
                    node.children.push(match c {
                        ConditionLiteral::Standard(l) => standard_node(l, dialect),
                        ConditionLiteral::Builtin(bl) => builtin_node(bl, dialect),
                    });
                }
            }
            node.children.extend(a.upper_guard.iter().map(|g| term_node(&g.term)));
            node
        }
    }
}

fn cover<'a>(spans: impl Iterator<Item = &'a SourceSpan>) -> Option<SourceSpan> {
    spans.fold(None, |acc: Option<SourceSpan>, s| {
        Some(match acc {
            None => s.clone(),
            Some(a) => a.cover(s),
        })
    })
}

/// Tree view of a program: rules at depth 1, then head/body, literals,
/// predicates and terms.
pub fn build_outline(program: &Program) -> OutlineNode {
    let dialect = program.dialect;
    let file = program
        .rules
        .first()
        .map(|r| r.span.file.to_string())
        .unwrap_or_default();
    let index = LineIndex::new(&file, &program.source);
    let mut span = index.span(&program.source, 0, program.source.len());
    for r in &program.rules {
        if !span.encloses(&r.span) {
            span = span.cover(&r.span);
        }
    }
    let mut root = OutlineNode::leaf("program", OutlineKind::Program, span);
    for rule in &program.rules {
        let mut node = OutlineNode::leaf(rule_label(rule, program), OutlineKind::Rule, rule.span.clone());
        if let Some(hspan) = cover(rule.head.iter().map(|l| &l.span)) {
            let mut head = OutlineNode::leaf("head", OutlineKind::Head, hspan);
            head.children = rule.head.iter().map(|l| standard_node(l, dialect)).collect();
            node.children.push(head);
        }
        if let Some(bspan) = cover(rule.body.iter().map(BodyLiteral::span)) {
            let mut body = OutlineNode::leaf("body", OutlineKind::Body, bspan);
            body.children = rule.body.iter().map(|b| body_node(b, dialect)).collect();
            node.children.push(body);
        }
        root.children.push(node);
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn example_rule_outline() {
        let p = parse("a(X) :- c(X).", Dialect::Gringo).program;
        let o = build_outline(&p);
        assert_eq!(o.children.len(), 1);
        let labels: Vec<_> = o.children[0].children.iter().map(|n| n.label.as_str()).collect();
        assert_eq!(labels, ["head", "body"]);
        let lit = &o.children[0].children[0].children[0];
        assert_eq!(lit.children[0].kind, OutlineKind::Predicate);
        assert_eq!(lit.children[0].label, "a/1");
        assert_eq!(lit.children[1].label, "X");
    }

    #[test]
    fn empty_and_named() {
        let p = parse("", Dialect::Gringo).program;
        assert!(build_outline(&p).children.is_empty());
        let p = parse("%! name(r1)\na :- b.", Dialect::Gringo).program;
        assert_eq!(build_outline(&p).children[0].label, "r1");
    }

    #[test]
    fn long_rules_truncate() {
        let p = parse("averyveryverylongpredicatename(X) :- anotherlongpredicate(X).", Dialect::Gringo).program;
        let label = &build_outline(&p).children[0].label;
        assert_eq!(label.chars().count(), LABEL_WIDTH + 1);
        assert!(label.ends_with('…'));
    }
}
