use std::collections::BTreeSet;

use crate::model::*;
use crate::parse::Diagnostic;
use crate::span::SourceSpan;

pub const UNSAFE_VARIABLE: &str = "unsafe-variable";
pub const CONST_ASSIGNMENT_LHS: &str = "const-assignment-lhs";

/// Variables in positions that bind: plain arguments and function
/// arguments, but nothing under arithmetic or intervals.
fn binding_vars(t: &Term, out: &mut BTreeSet<String>) {
    match &t.kind {
        TermKind::Variable { name } if name != "_" => {
            out.insert(name.clone());
        }
        TermKind::Function { args, .. } => args.iter().for_each(|a| binding_vars(a, out)),
        _ => {}
    }
}

fn literal_binders(l: &StandardLiteral, out: &mut BTreeSet<String>) {
    l.args.iter().for_each(|a| binding_vars(a, out));
}

fn all_vars(t: &Term) -> Vec<&Term> {
    let mut v = Vec::new();
    t.variables(&mut v);
    v
}

struct Check<'a> {
    bound: BTreeSet<String>,
    found: Vec<(&'a str, SourceSpan)>,
}

impl<'a> Check<'a> {
    fn require(&mut self, t: &'a Term, local: &BTreeSet<String>) {
        for v in all_vars(t) {
            let name = v.as_variable().unwrap_or_default();
            if name != "_" && !self.bound.contains(name) && !local.contains(name) {
                self.found.push((name, v.span.clone()));
            }
        }
    }

    /// A literal with conditions: the conditions' positive literals bind
    /// variables local to it.
    fn conditional(&mut self, l: &'a StandardLiteral) {
        let mut local = BTreeSet::new();
        if l.conditions.is_empty() {
            // plain arguments of positive literals are bound already, so
            // this only catches arithmetic positions and negated literals
            l.args.iter().for_each(|a| self.require(a, &local));
            return;
        }
        for c in l.conditions.iter().filter(|c| !c.default_negation) {
            literal_binders(c, &mut local);
        }
        l.args.iter().for_each(|a| self.require(a, &local));
        for c in &l.conditions {
            c.args.iter().for_each(|a| self.require(a, &local));
        }
    }
}

/// Variables that positive body literals and assignments bind in `rule`.
pub fn bound_variables(rule: &Rule) -> BTreeSet<String> {
    let mut bound = BTreeSet::new();
    for b in &rule.body {
        if let BodyLiteral::Standard(l) = b {
            if !l.default_negation && l.conditions.is_empty() {
                literal_binders(l, &mut bound);
            }
        }
    }
    let all_bound = |t: &Term, bound: &BTreeSet<String>| {
        all_vars(t)
            .iter()
            .all(|v| bound.contains(v.as_variable().unwrap_or_default()))
    };
    loop {
        let mut added = None;
        for b in &rule.body {
            match b {
                BodyLiteral::Builtin(bl) if bl.op == CompareOp::Eq => {
                    for (x, other) in [(&bl.left, &bl.right), (&bl.right, &bl.left)] {
                        if let Some(v) = x.as_variable() {
                            if v != "_" && !bound.contains(v) && all_bound(other, &bound) {
                                added = Some(v.to_string());
                            }
                        }
                    }
                }
                BodyLiteral::Aggregate(a) if !a.default_negation => {
                    for g in a.lower_guard.iter().chain(&a.upper_guard) {
                        if g.op == CompareOp::Eq {
                            if let Some(v) = g.term.as_variable() {
                                if v != "_" && !bound.contains(v) {
                                    added = Some(v.to_string());
                                }
                            }
                        }
                    }
                }
                _ => {}
            }
            if added.is_some() {
                break;
            }
        }
        match added {
            Some(v) => {
                bound.insert(v);
            }
            None => return bound,
        }
    }
}

/// Unsafe variables of `rule` with the span of their first offending
/// occurrence, one entry per variable, in source order.
pub fn unsafe_variables(rule: &Rule) -> Vec<(String, SourceSpan)> {
    let mut check = Check {
        bound: bound_variables(rule),
        found: Vec::new(),
    };
    let none = BTreeSet::new();
    for l in &rule.head {
        check.conditional(l);
    }
    for b in &rule.body {
        match b {
            BodyLiteral::Standard(l) => check.conditional(l),
            BodyLiteral::Builtin(bl) => {
                check.require(&bl.left, &none);
                check.require(&bl.right, &none);
            }
            BodyLiteral::Aggregate(a) => {
                for g in a.lower_guard.iter().chain(&a.upper_guard) {
                    check.require(&g.term, &none);
                }
                for e in &a.elements {
                    let mut local = BTreeSet::new();
                    for c in &e.conditions {
                        if let ConditionLiteral::Standard(l) = c {
                            if !l.default_negation {
                                literal_binders(l, &mut local);
                            }
                        }
                    }
                    for t in &e.terms {
                        check.require(t, &local);
                    }
                    for c in &e.conditions {
                        match c {
                            ConditionLiteral::Standard(l) => {
                                l.args.iter().for_each(|t| check.require(t, &local))
                            }
                            ConditionLiteral::Builtin(bl) => {
                                check.require(&bl.left, &local);
                                check.require(&bl.right, &local);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut found = check.found;
    found.sort_by_key(|(_, s)| s.start_byte);
    let mut seen = BTreeSet::new();
    found
        .into_iter()
        .filter(|(n, _)| seen.insert(*n))
        .map(|(n, s)| (n.to_string(), s))
        .collect()
}

pub fn check_safety(program: &Program) -> Vec<Diagnostic> {
    program
        .rules
        .iter()
        .flat_map(|r| {
            unsafe_variables(r).into_iter().map(|(name, span)| {
                Diagnostic::error(
                    UNSAFE_VARIABLE,
                    format!("variable {name} is unsafe: no positive body literal binds it"),
                    span,
                )
            })
        })
        .collect()
}

pub fn check_assignments(program: &Program) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for rule in &program.rules {
        for b in &rule.body {
            if let BodyLiteral::Builtin(bl) = b {
                if bl.is_assignment && bl.left.as_constant().is_some() {
                    out.push(Diagnostic::warning(
                        CONST_ASSIGNMENT_LHS,
                        format!("constant {} on the left-hand side of an assignment", bl.left),
                        bl.span.clone(),
                    ));
                }
            }
        }
    }
    out
}
