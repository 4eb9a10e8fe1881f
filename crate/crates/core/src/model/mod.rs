//! Language-neutral representation of program elements.
//!
//! Both dialects share these types. Where the languages differ (conditions on
//! literals exist only in Gringo, aggregate surface syntax differs) the
//! difference is carried as data and enforced by [`Rule::validate`] and the
//! printer rather than by separate type hierarchies.

mod ground;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::span::SourceSpan;

pub use ground::{Interpretation, PredicateSig, Value};
pub use ground::GroundLiteral;
pub use print::{pretty_print, PrettyPrint};
pub(crate) use print::rule_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Gringo,
    Dlv,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Gringo => "gringo",
            Dialect::Dlv => "dlv",
        })
    }
}

impl std::str::FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gringo" | "clingo" | "lparse" => Ok(Dialect::Gringo),
            "dlv" => Ok(Dialect::Dlv),
            other => Err(format!("unknown dialect `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{construct} is not supported by the {dialect} dialect")]
    UnsupportedConstruct {
        construct: &'static str,
        dialect: Dialect,
    },
    #[error("interpretation would contain both {0} and its complement")]
    Inconsistent(GroundLiteral),
    #[error("cannot evaluate {0}")]
    Evaluation(String),
}

/// Integer and symbolic constants share one variant; the enum tag is the
/// lexical kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Constant {
    Integer(i64),
    Symbol(String),
    String(String),
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Integer(n) => write!(f, "{n}"),
            Constant::Symbol(s) => f.write_str(s),
            Constant::String(s) => write!(f, "\"{}\"", print::escape(s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TermKind {
    Constant(Constant),
    Variable {
        name: String,
    },
    Function {
        name: String,
        args: Vec<Term>,
    },
    Arithmetic {
        op: ArithOp,
        left: Box<Term>,
        right: Box<Term>,
    },
    Interval {
        low: Box<Term>,
        high: Box<Term>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    #[serde(flatten)]
    pub kind: TermKind,
    pub span: SourceSpan,
}

impl Term {
    pub fn new(kind: TermKind) -> Self {
        Self {
            kind,
            span: SourceSpan::default(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::new(TermKind::Constant(Constant::Integer(n)))
    }

    pub fn sym(s: impl Into<String>) -> Self {
        Self::new(TermKind::Constant(Constant::Symbol(s.into())))
    }

    pub fn string(s: impl Into<String>) -> Self {
        Self::new(TermKind::Constant(Constant::String(s.into())))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::new(TermKind::Variable { name: name.into() })
    }

    /// A function term; with no arguments this degenerates to a symbol.
    pub fn func(name: impl Into<String>, args: Vec<Term>) -> Self {
        if args.is_empty() {
            return Self::sym(name);
        }
        Self::new(TermKind::Function {
            name: name.into(),
            args,
        })
    }

    pub fn arith(op: ArithOp, left: Term, right: Term) -> Self {
        Self::new(TermKind::Arithmetic {
            op,
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn interval(low: Term, high: Term) -> Self {
        Self::new(TermKind::Interval {
            low: Box::new(low),
            high: Box::new(high),
        })
    }

    pub fn as_variable(&self) -> Option<&str> {
        match &self.kind {
            TermKind::Variable { name } => Some(name),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<&Constant> {
        match &self.kind {
            TermKind::Constant(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit(&mut |t| {
            if matches!(t.kind, TermKind::Variable { .. }) {
                ground = false;
            }
        });
        ground
    }

    /// Pre-order traversal over this term and all subterms.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        f(self);
        match &self.kind {
            TermKind::Constant(_) | TermKind::Variable { .. } => {}
            TermKind::Function { args, .. } => args.iter().for_each(|a| a.visit(f)),
            TermKind::Arithmetic { left, right, .. } => {
                left.visit(f);
                right.visit(f);
            }
            TermKind::Interval { low, high } => {
                low.visit(f);
                high.visit(f);
            }
        }
    }

    /// Variables in order of first occurrence, with duplicates.
    pub fn variables<'a>(&'a self, out: &mut Vec<&'a Term>) {
        self.visit(&mut |t| {
            if let TermKind::Variable { .. } = t.kind {
                out.push(t);
            }
        });
    }

    /// Evaluates a variable-free term to a single value. Intervals are
    /// rejected; use [`Term::values`] for those.
    pub fn eval(&self) -> Result<Value, ModelError> {
        match &self.kind {
            TermKind::Constant(c) => Ok(Value::from(c.clone())),
            TermKind::Variable { name } => Err(ModelError::Evaluation(format!(
                "variable {name} has no value"
            ))),
            TermKind::Function { name, args } => Ok(Value::Function(
                name.clone(),
                args.iter().map(Term::eval).collect::<Result<_, _>>()?,
            )),
            TermKind::Arithmetic { op, left, right } => {
                Value::arith(*op, &left.eval()?, &right.eval()?)
            }
            TermKind::Interval { .. } => Err(ModelError::Evaluation(
                "an interval denotes several values".into(),
            )),
        }
    }

    /// All values a variable-free term denotes (several when it contains
    /// intervals).
    pub fn values(&self) -> Result<Vec<Value>, ModelError> {
        match &self.kind {
            TermKind::Interval { low, high } => {
                let lo = low.eval()?.as_int().ok_or_else(|| {
                    ModelError::Evaluation(format!("interval bound {low} is not an integer"))
                })?;
                let hi = high.eval()?.as_int().ok_or_else(|| {
                    ModelError::Evaluation(format!("interval bound {high} is not an integer"))
                })?;
                Ok((lo..=hi).map(Value::Integer).collect())
            }
            TermKind::Function { name, args } => {
                let mut combos: Vec<Vec<Value>> = vec![Vec::new()];
                for arg in args {
                    let vals = arg.values()?;
                    combos = combos
                        .into_iter()
                        .flat_map(|prefix| {
                            vals.iter().map(move |v| {
                                let mut p = prefix.clone();
                                p.push(v.clone());
                                p
                            })
                        })
                        .collect();
                }
                Ok(combos
                    .into_iter()
                    .map(|a| Value::Function(name.clone(), a))
                    .collect())
            }
            TermKind::Arithmetic { .. } if self.contains_interval() => Err(
                ModelError::Evaluation("arithmetic over intervals".into()),
            ),
            _ => Ok(vec![self.eval()?]),
        }
    }

    pub fn contains_interval(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= matches!(t.kind, TermKind::Interval { .. }));
        found
    }

    pub fn contains_arithmetic(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            found |= matches!(t.kind, TermKind::Arithmetic { .. } | TermKind::Interval { .. })
        });
        found
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print::term(&mut s, self);
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardLiteral {
    pub strong_negation: bool,
    pub predicate: String,
    pub args: Vec<Term>,
    pub default_negation: bool,
    /// Condition literals (`l : c1 : c2`). Always empty for DLV.
    pub conditions: Vec<StandardLiteral>,
    pub span: SourceSpan,
    /// Span of the predicate name token.
    pub predicate_span: SourceSpan,
}

impl StandardLiteral {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            strong_negation: false,
            predicate: predicate.into(),
            args,
            default_negation: false,
            conditions: Vec::new(),
            span: SourceSpan::default(),
            predicate_span: SourceSpan::default(),
        }
    }

    pub fn negated(mut self) -> Self {
        self.default_negation = true;
        self
    }

    pub fn strong(mut self) -> Self {
        self.strong_negation = true;
        self
    }

    /// Attaches conditions, which only the Gringo dialect supports.
    pub fn with_conditions(
        mut self,
        dialect: Dialect,
        conditions: Vec<StandardLiteral>,
    ) -> Result<Self, ModelError> {
        if dialect == Dialect::Dlv && !conditions.is_empty() {
            return Err(ModelError::UnsupportedConstruct {
                construct: "conditional literal",
                dialect,
            });
        }
        self.conditions = conditions;
        Ok(self)
    }

    pub fn signature(&self) -> PredicateSig {
        PredicateSig::new(&self.predicate, self.args.len())
    }

    pub fn is_positive(&self) -> bool {
        !self.default_negation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompareOp {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CompareOp::Eq => ord == Equal,
            CompareOp::Ne => ord != Equal,
            CompareOp::Lt => ord == Less,
            CompareOp::Le => ord != Greater,
            CompareOp::Gt => ord == Greater,
            CompareOp::Ge => ord != Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BuiltinLiteral {
    pub op: CompareOp,
    pub left: Term,
    pub right: Term,
    /// Set by the parser when `op` is `=` and exactly one side is a variable
    /// that no positive body literal binds.
    pub is_assignment: bool,
    pub span: SourceSpan,
}

impl BuiltinLiteral {
    pub fn new(op: CompareOp, left: Term, right: Term) -> Self {
        Self {
            op,
            left,
            right,
            is_assignment: false,
            span: SourceSpan::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregateFunction {
    Count,
    Sum,
    Min,
    Max,
}

impl AggregateFunction {
    pub fn keyword(self) -> &'static str {
        match self {
            AggregateFunction::Count => "#count",
            AggregateFunction::Sum => "#sum",
            AggregateFunction::Min => "#min",
            AggregateFunction::Max => "#max",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Guard {
    pub term: Term,
    pub op: CompareOp,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConditionLiteral {
    Standard(StandardLiteral),
    Builtin(BuiltinLiteral),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AggregateElement {
    pub terms: Vec<Term>,
    pub conditions: Vec<ConditionLiteral>,
    pub span: SourceSpan,
}

/// `lower.term lower.op #fn{...} upper.op upper.term`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AggregateLiteral {
    pub function: AggregateFunction,
    pub elements: Vec<AggregateElement>,
    pub lower_guard: Option<Guard>,
    pub upper_guard: Option<Guard>,
    pub dialect: Dialect,
    pub default_negation: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodyLiteral {
    Standard(StandardLiteral),
    Builtin(BuiltinLiteral),
    Aggregate(AggregateLiteral),
}

impl BodyLiteral {
    pub fn span(&self) -> &SourceSpan {
        match self {
            BodyLiteral::Standard(l) => &l.span,
            BodyLiteral::Builtin(l) => &l.span,
            BodyLiteral::Aggregate(l) => &l.span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommentKind {
    Line,
    Block,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Comment {
    /// Raw comment text including its delimiters.
    pub text: String,
    pub kind: CommentKind,
    pub span: SourceSpan,
    /// Index into `Program::rules` of the rule this comment belongs to.
    pub attached_to: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetaKind {
    Name,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaCommand {
    pub kind: MetaKind,
    pub payload: String,
    /// Index of the rule the command applies to.
    pub target: Option<usize>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Fact,
    Constraint,
    Proper,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    /// Disjunctive head; empty for constraints.
    pub head: Vec<StandardLiteral>,
    pub body: Vec<BodyLiteral>,
    pub name: Option<String>,
    pub comments: Vec<Comment>,
    pub span: SourceSpan,
}

impl Rule {
    pub fn new(head: Vec<StandardLiteral>, body: Vec<BodyLiteral>) -> Self {
        Self {
            head,
            body,
            name: None,
            comments: Vec::new(),
            span: SourceSpan::default(),
        }
    }

    pub fn fact(literal: StandardLiteral) -> Self {
        Self::new(vec![literal], Vec::new())
    }

    pub fn kind(&self) -> RuleKind {
        if self.head.is_empty() {
            RuleKind::Constraint
        } else if self.body.is_empty() && self.head.len() == 1 {
            RuleKind::Fact
        } else {
            RuleKind::Proper
        }
    }

    /// Checks dialect-specific restrictions.
    pub fn validate(&self, dialect: Dialect) -> Result<(), ModelError> {
        if dialect == Dialect::Dlv {
            let conditional = self.head.iter().any(|l| !l.conditions.is_empty())
                || self.body.iter().any(|b| {
                    matches!(b, BodyLiteral::Standard(l) if !l.conditions.is_empty())
                });
            if conditional {
                return Err(ModelError::UnsupportedConstruct {
                    construct: "conditional literal",
                    dialect,
                });
            }
        }
        Ok(())
    }

    /// Standard literals in head, body, conditions and aggregate elements.
    pub fn standard_literals(&self) -> Vec<&StandardLiteral> {
        fn push<'a>(l: &'a StandardLiteral, out: &mut Vec<&'a StandardLiteral>) {
            out.push(l);
            for c in &l.conditions {
                push(c, out);
            }
        }
        let mut out = Vec::new();
        for l in &self.head {
            push(l, &mut out);
        }
        for b in &self.body {
            match b {
                BodyLiteral::Standard(l) => push(l, &mut out),
                BodyLiteral::Builtin(_) => {}
                BodyLiteral::Aggregate(a) => {
                    for e in &a.elements {
                        for c in &e.conditions {
                            if let ConditionLiteral::Standard(l) = c {
                                push(l, &mut out);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Every term occurring in the rule, including guard and element terms.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        for l in self.standard_literals() {
            out.extend(l.args.iter());
        }
        for b in &self.body {
            match b {
                BodyLiteral::Builtin(bl) => {
                    out.push(&bl.left);
                    out.push(&bl.right);
                }
                BodyLiteral::Aggregate(a) => {
                    out.extend(a.lower_guard.iter().map(|g| &g.term));
                    out.extend(a.upper_guard.iter().map(|g| &g.term));
                    for e in &a.elements {
                        out.extend(e.terms.iter());
                        for c in &e.conditions {
                            if let ConditionLiteral::Builtin(bl) = c {
                                out.push(&bl.left);
                                out.push(&bl.right);
                            }
                        }
                    }
                }
                BodyLiteral::Standard(_) => {}
            }
        }
        out
    }

    pub fn has_aggregates(&self) -> bool {
        self.body
            .iter()
            .any(|b| matches!(b, BodyLiteral::Aggregate(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Program {
    pub dialect: Dialect,
    pub rules: Vec<Rule>,
    pub standalone_comments: Vec<Comment>,
    pub meta_commands: Vec<MetaCommand>,
    #[serde(skip)]
    pub source: String,
}

impl Program {
    pub fn new(dialect: Dialect) -> Self {
        Self {
            dialect,
            rules: Vec::new(),
            standalone_comments: Vec::new(),
            meta_commands: Vec::new(),
            source: String::new(),
        }
    }

    /// Appends one fact per literal of `interpretation`.
    pub fn add_facts(&mut self, interpretation: &Interpretation) {
        self.rules.extend(
            interpretation
                .iter()
                .map(|l| Rule::fact(StandardLiteral::from(l))),
        );
    }

    pub fn comment_count(&self) -> usize {
        self.standalone_comments.len()
            + self.rules.iter().map(|r| r.comments.len()).sum::<usize>()
    }
}

/// Every constant and integer in the program. Intervals with literal integer
/// bounds contribute every integer in their range.
pub fn herbrand_constants(program: &Program) -> BTreeSet<Constant> {
    let mut out = BTreeSet::new();
    for rule in &program.rules {
        for term in rule.terms() {
            collect_constants(term, &mut out);
        }
    }
    out
}

fn collect_constants(term: &Term, out: &mut BTreeSet<Constant>) {
    match &term.kind {
        TermKind::Constant(c) => {
            out.insert(c.clone());
        }
        TermKind::Variable { .. } => {}
        TermKind::Function { args, .. } => args.iter().for_each(|a| collect_constants(a, out)),
        TermKind::Arithmetic { left, right, .. } => {
            collect_constants(left, out);
            collect_constants(right, out);
        }
        TermKind::Interval { low, high } => {
            if let (
                TermKind::Constant(Constant::Integer(lo)),
                TermKind::Constant(Constant::Integer(hi)),
            ) = (&low.kind, &high.kind)
            {
                out.extend((*lo..=*hi).map(Constant::Integer));
            } else {
                collect_constants(low, out);
                collect_constants(high, out);
            }
        }
    }
}

/// Resets every source span so that elements parsed from different texts can
/// be compared structurally.
pub trait StripSpans {
    fn strip_spans(&mut self);

    fn without_spans(&self) -> Self
    where
        Self: Clone,
    {
        let mut c = self.clone();
        c.strip_spans();
        c
    }
}

impl StripSpans for Term {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        match &mut self.kind {
            TermKind::Constant(_) | TermKind::Variable { .. } => {}
            TermKind::Function { args, .. } => args.iter_mut().for_each(StripSpans::strip_spans),
            TermKind::Arithmetic { left, right, .. } => {
                left.strip_spans();
                right.strip_spans();
            }
            TermKind::Interval { low, high } => {
                low.strip_spans();
                high.strip_spans();
            }
        }
    }
}

impl StripSpans for StandardLiteral {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.predicate_span = SourceSpan::default();
        self.args.iter_mut().for_each(StripSpans::strip_spans);
        self.conditions.iter_mut().for_each(StripSpans::strip_spans);
    }
}

impl StripSpans for BuiltinLiteral {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.left.strip_spans();
        self.right.strip_spans();
    }
}

impl StripSpans for AggregateLiteral {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        for g in self.lower_guard.iter_mut().chain(self.upper_guard.iter_mut()) {
            g.term.strip_spans();
        }
        for e in &mut self.elements {
            e.span = SourceSpan::default();
            e.terms.iter_mut().for_each(StripSpans::strip_spans);
            for c in &mut e.conditions {
                match c {
                    ConditionLiteral::Standard(l) => l.strip_spans(),
                    ConditionLiteral::Builtin(l) => l.strip_spans(),
                }
            }
        }
    }
}

impl StripSpans for BodyLiteral {
    fn strip_spans(&mut self) {
        match self {
            BodyLiteral::Standard(l) => l.strip_spans(),
            BodyLiteral::Builtin(l) => l.strip_spans(),
            BodyLiteral::Aggregate(l) => l.strip_spans(),
        }
    }
}

impl StripSpans for Comment {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
    }
}

impl StripSpans for Rule {
    fn strip_spans(&mut self) {
        self.span = SourceSpan::default();
        self.head.iter_mut().for_each(StripSpans::strip_spans);
        self.body.iter_mut().for_each(StripSpans::strip_spans);
        self.comments.iter_mut().for_each(StripSpans::strip_spans);
    }
}

impl StripSpans for Program {
    fn strip_spans(&mut self) {
        self.rules.iter_mut().for_each(StripSpans::strip_spans);
        self.standalone_comments
            .iter_mut()
            .for_each(StripSpans::strip_spans);
        for m in &mut self.meta_commands {
            m.span = SourceSpan::default();
        }
        self.source.clear();
    }
}
