//! Dialect-aware printing of program elements.
//!
//! Output is canonical: binary arithmetic without spaces, `, ` between body
//! literals, strong negation as a `-` prefix, default negation as `not `.
//! Disjunction prints as `|` for Gringo and `v` for DLV.

use super::*;

pub trait PrettyPrint {
    fn print(&self, out: &mut String, dialect: Dialect) -> Result<(), ModelError>;
}

pub fn pretty_print<T: PrettyPrint + ?Sized>(
    element: &T,
    dialect: Dialect,
) -> Result<String, ModelError> {
    let mut out = String::new();
    element.print(&mut out, dialect)?;
    Ok(out)
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn term(out: &mut String, t: &Term) {
    term_prec(out, t, 0);
}

fn term_prec(out: &mut String, t: &Term, min_prec: u8) {
    match &t.kind {
        TermKind::Constant(c) => out.push_str(&c.to_string()),
        TermKind::Variable { name } => out.push_str(name),
        TermKind::Function { name, args } => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                term(out, a);
            }
            out.push(')');
        }
        TermKind::Arithmetic { op, left, right } => {
            let p = op.precedence();
            let parens = p < min_prec;
            if parens {
                out.push('(');
            }
            term_prec(out, left, p);
            out.push_str(op.symbol());
            // right operand binds tighter so that a-(b-c) keeps its shape
            let negative_const = matches!(right.kind, TermKind::Constant(Constant::Integer(n)) if n < 0);
            if negative_const {
                out.push('(');
                term(out, right);
                out.push(')');
            } else {
                term_prec(out, right, p + 1);
            }
            if parens {
                out.push(')');
            }
        }
        TermKind::Interval { low, high } => {
            let parens = min_prec > 0;
            if parens {
                out.push('(');
            }
            term_prec(out, low, 1);
            out.push_str("..");
            term_prec(out, high, 1);
            if parens {
                out.push(')');
            }
        }
    }
}

impl PrettyPrint for Term {
    fn print(&self, out: &mut String, _dialect: Dialect) -> Result<(), ModelError> {
        term(out, self);
        Ok(())
    }
}

impl PrettyPrint for StandardLiteral {
    fn print(&self, out: &mut String, dialect: Dialect) -> Result<(), ModelError> {
        if dialect == Dialect::Dlv && !self.conditions.is_empty() {
            return Err(ModelError::UnsupportedConstruct {
                construct: "conditional literal",
                dialect,
            });
        }
        if self.default_negation {
            out.push_str("not ");
        }
        if self.strong_negation {
            out.push('-');
        }
        out.push_str(&self.predicate);
        if !self.args.is_empty() {
            out.push('(');
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                term(out, a);
            }
            out.push(')');
        }
        for c in &self.conditions {
            out.push(':');
            if c.strong_negation && !c.default_negation {
                // keep `:` and `-` from lexing as `:-`
                out.push(' ');
            }
            c.print(out, dialect)?;
        }
        Ok(())
    }
}

impl PrettyPrint for BuiltinLiteral {
    fn print(&self, out: &mut String, _dialect: Dialect) -> Result<(), ModelError> {
        term(out, &self.left);
        out.push(' ');
        out.push_str(self.op.symbol());
        out.push(' ');
        term(out, &self.right);
        Ok(())
    }
}

impl PrettyPrint for ConditionLiteral {
    fn print(&self, out: &mut String, dialect: Dialect) -> Result<(), ModelError> {
        match self {
            ConditionLiteral::Standard(l) => l.print(out, dialect),
            ConditionLiteral::Builtin(l) => l.print(out, dialect),
        }
    }
}

impl PrettyPrint for AggregateLiteral {
    fn print(&self, out: &mut String, dialect: Dialect) -> Result<(), ModelError> {
        if self.default_negation {
            out.push_str("not ");
        }
        if let Some(g) = &self.lower_guard {
            term(out, &g.term);
            out.push(' ');
            out.push_str(g.op.symbol());
            out.push(' ');
        }
        out.push_str(self.function.keyword());
        out.push('{');
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                out.push_str("; ");
            }
            for (j, t) in e.terms.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                term(out, t);
            }
            if !e.conditions.is_empty() {
                out.push_str(" : ");
                for (j, c) in e.conditions.iter().enumerate() {
                    if j > 0 {
                        out.push_str(", ");
                    }
                    c.print(out, dialect)?;
                }
            }
        }
        out.push('}');
        if let Some(g) = &self.upper_guard {
            out.push(' ');
            out.push_str(g.op.symbol());
            out.push(' ');
            term(out, &g.term);
        }
        Ok(())
    }
}

impl PrettyPrint for BodyLiteral {
    fn print(&self, out: &mut String, dialect: Dialect) -> Result<(), ModelError> {
        match self {
            BodyLiteral::Standard(l) => l.print(out, dialect),
            BodyLiteral::Builtin(l) => l.print(out, dialect),
            BodyLiteral::Aggregate(l) => l.print(out, dialect),
        }
    }
}

/// The rule text alone, without comments or name meta-command.
pub(crate) fn rule_text(rule: &Rule, out: &mut String, dialect: Dialect) -> Result<(), ModelError> {
    let sep = match dialect {
        Dialect::Gringo => " | ",
        Dialect::Dlv => " v ",
    };
    for (i, h) in rule.head.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        h.print(out, dialect)?;
    }
    if !rule.body.is_empty() {
        if rule.head.is_empty() {
            out.push_str(":- ");
        } else {
            out.push_str(" :- ");
        }
        for (i, b) in rule.body.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            b.print(out, dialect)?;
        }
    }
    out.push('.');
    Ok(())
}

fn names_rule(comment: &Comment, name: &str) -> bool {
    crate::parse::meta_name(&comment.text).as_deref() == Some(name)
}

impl PrettyPrint for Rule {
    /// Leading comments go on their own lines above the rule; comments that
    /// started after the rule began are appended to its line.
    fn print(&self, out: &mut String, dialect: Dialect) -> Result<(), ModelError> {
        let (leading, trailing): (Vec<&Comment>, Vec<&Comment>) = self
            .comments
            .iter()
            .partition(|c| c.span.start_byte <= self.span.start_byte);
        let needs_name = self
            .name
            .as_deref()
            .is_some_and(|n| !self.comments.iter().any(|c| names_rule(c, n)));
        if needs_name {
            out.push_str("%! name(");
            out.push_str(self.name.as_deref().unwrap_or_default());
            out.push_str(")\n");
        }
        for c in leading {
            out.push_str(&c.text);
            out.push('\n');
        }
        rule_text(self, out, dialect)?;
        for c in trailing {
            out.push(' ');
            out.push_str(&c.text);
        }
        Ok(())
    }
}

impl PrettyPrint for Program {
    fn print(&self, out: &mut String, dialect: Dialect) -> Result<(), ModelError> {
        enum Item<'a> {
            Rule(&'a Rule),
            Comment(&'a Comment),
        }
        let mut items: Vec<(usize, Item)> = self
            .rules
            .iter()
            .map(|r| {
                let start = r
                    .comments
                    .iter()
                    .map(|c| c.span.start_byte)
                    .chain(std::iter::once(r.span.start_byte))
                    .min()
                    .unwrap_or(r.span.start_byte);
                (start, Item::Rule(r))
            })
            .chain(
                self.standalone_comments
                    .iter()
                    .map(|c| (c.span.start_byte, Item::Comment(c))),
            )
            .collect();
        items.sort_by_key(|(k, _)| *k);
        for (_, item) in items {
            match item {
                Item::Rule(r) => r.print(out, dialect)?,
                Item::Comment(c) => out.push_str(&c.text),
            }
            out.push('\n');
        }
        Ok(())
    }
}

impl PrettyPrint for GroundLiteral {
    /// A ground literal prints as a fact.
    fn print(&self, out: &mut String, _dialect: Dialect) -> Result<(), ModelError> {
        out.push_str(&self.to_string());
        out.push('.');
        Ok(())
    }
}

impl PrettyPrint for Value {
    fn print(&self, out: &mut String, _dialect: Dialect) -> Result<(), ModelError> {
        out.push_str(&self.to_string());
        Ok(())
    }
}
