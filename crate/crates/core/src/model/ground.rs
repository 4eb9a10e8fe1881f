use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ArithOp, Constant, ModelError, StandardLiteral, Term};

/// A ground term. The derived order puts integers before symbols, symbols
/// before strings and strings before compound terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Integer(i64),
    Symbol(String),
    String(String),
    Function(String, Vec<Value>),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Integer(n) => Some(*n),
            _ => None,
        }
    }

    pub fn sym(s: impl Into<String>) -> Self {
        Value::Symbol(s.into())
    }

    pub fn arith(op: ArithOp, left: &Value, right: &Value) -> Result<Value, ModelError> {
        let (Some(l), Some(r)) = (left.as_int(), right.as_int()) else {
            return Err(ModelError::Evaluation(format!(
                "{left}{}{right}: arithmetic on non-integer operands",
                op.symbol()
            )));
        };
        let res = match op {
            ArithOp::Add => l.checked_add(r),
            ArithOp::Sub => l.checked_sub(r),
            ArithOp::Mul => l.checked_mul(r),
            ArithOp::Div if r == 0 => {
                return Err(ModelError::Evaluation(format!("{l}/0: division by zero")))
            }
            ArithOp::Div => l.checked_div(r),
        };
        res.map(Value::Integer)
            .ok_or_else(|| ModelError::Evaluation(format!("{l}{}{r}: overflow", op.symbol())))
    }

    pub fn to_term(&self) -> Term {
        match self {
            Value::Integer(n) => Term::int(*n),
            Value::Symbol(s) => Term::sym(s.clone()),
            Value::String(s) => Term::string(s.clone()),
            Value::Function(name, args) => {
                Term::func(name.clone(), args.iter().map(Value::to_term).collect())
            }
        }
    }

    /// Text for display contexts such as labels: strings lose their quotes.
    pub fn display_text(&self) -> String {
        match self {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
}

impl From<Constant> for Value {
    fn from(c: Constant) -> Self {
        match c {
            Constant::Integer(n) => Value::Integer(n),
            Constant::Symbol(s) => Value::Symbol(s),
            Constant::String(s) => Value::String(s),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(n) => write!(f, "{n}"),
            Value::Symbol(s) => f.write_str(s),
            Value::String(s) => write!(f, "\"{}\"", super::print::escape(s)),
            Value::Function(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::parse::parse_ground_term(&text).map_err(serde::de::Error::custom)
    }
}

/// Predicate identity: name and arity. Strong negation is a property of the
/// literal, not of the predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PredicateSig {
    pub name: String,
    pub arity: usize,
}

impl PredicateSig {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl std::str::FromStr for PredicateSig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arity) = s
            .rsplit_once('/')
            .ok_or_else(|| format!("expected name/arity, got `{s}`"))?;
        let arity = arity
            .parse()
            .map_err(|_| format!("invalid arity in `{s}`"))?;
        if name.is_empty() {
            return Err(format!("empty predicate name in `{s}`"));
        }
        Ok(PredicateSig::new(name, arity))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundLiteral {
    pub strong_negation: bool,
    pub predicate: String,
    pub args: Vec<Value>,
}

impl GroundLiteral {
    pub fn new(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        Self {
            strong_negation: false,
            predicate: predicate.into(),
            args,
        }
    }

    pub fn negative(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        Self {
            strong_negation: true,
            ..Self::new(predicate, args)
        }
    }

    pub fn signature(&self) -> PredicateSig {
        PredicateSig::new(&self.predicate, self.args.len())
    }

    pub fn complement(&self) -> Self {
        Self {
            strong_negation: !self.strong_negation,
            ..self.clone()
        }
    }

    fn key(&self) -> (&str, usize, &[Value], bool) {
        (
            &self.predicate,
            self.args.len(),
            &self.args,
            self.strong_negation,
        )
    }
}

/// Ordered by predicate name, arity, arguments, then sign.
impl Ord for GroundLiteral {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for GroundLiteral {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroundLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strong_negation {
            f.write_str("-")?;
        }
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Serialize for GroundLiteral {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroundLiteral {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::parse::parse_ground_literal(&text).map_err(serde::de::Error::custom)
    }
}

impl From<&GroundLiteral> for StandardLiteral {
    fn from(l: &GroundLiteral) -> Self {
        let lit = StandardLiteral::atom(l.predicate.clone(), l.args.iter().map(Value::to_term).collect());
        if l.strong_negation {
            lit.strong()
        } else {
            lit
        }
    }
}

/// A finite, consistent set of ground literals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interpretation {
    literals: BTreeSet<GroundLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_literals(
        literals: impl IntoIterator<Item = GroundLiteral>,
    ) -> Result<Self, ModelError> {
        let mut i = Self::new();
        for l in literals {
            i.insert(l)?;
        }
        Ok(i)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Inserts a literal. Fails, leaving the set unchanged, when the
    /// complement is already present. Returns whether the literal was new.
    pub fn insert(&mut self, literal: GroundLiteral) -> Result<bool, ModelError> {
        if self.literals.contains(&literal.complement()) {
            return Err(ModelError::Inconsistent(literal));
        }
        Ok(self.literals.insert(literal))
    }

    pub fn remove(&mut self, literal: &GroundLiteral) -> bool {
        self.literals.remove(literal)
    }

    pub fn contains(&self, literal: &GroundLiteral) -> bool {
        self.literals.contains(literal)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundLiteral> {
        self.literals.iter()
    }

    pub fn literals(&self) -> &BTreeSet<GroundLiteral> {
        &self.literals
    }

    /// Literals whose predicate satisfies `keep`.
    pub fn project(&self, mut keep: impl FnMut(&GroundLiteral) -> bool) -> Interpretation {
        Interpretation {
            literals: self.literals.iter().filter(|l| keep(l)).cloned().collect(),
            label: None,
        }
    }

    /// Same literals, ignoring labels.
    pub fn same_literals(&self, other: &Interpretation) -> bool {
        self.literals == other.literals
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a Interpretation {
    type Item = &'a GroundLiteral;
    type IntoIter = std::collections::btree_set::Iter<'a, GroundLiteral>;

    fn into_iter(self) -> Self::IntoIter {
        self.literals.iter()
    }
}
