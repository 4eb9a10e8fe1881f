//! The `vis*` vocabulary: predicate schemas and validation.

use aspwb_core::{GroundLiteral, Interpretation, Value};
use serde::{Deserialize, Serialize};

use crate::VizError;

pub const PREFIX: &str = "vis";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgKind {
    /// Any ground term naming an element.
    Id,
    Int,
    /// Integer at least 1.
    Positive,
    /// Integer at least 0.
    Size,
    /// Symbol or string.
    Text,
    /// Symbolic colour name or `"#RRGGBB"`.
    Color,
}

#[derive(Debug, Clone, Copy)]
pub struct Schema {
    pub name: &'static str,
    pub args: &'static [ArgKind],
    pub doc: &'static str,
}

use ArgKind::*;

pub const SCHEMAS: &[Schema] = &[
    Schema { name: "visrect", args: &[Id, Size, Size], doc: "visrect(Id,W,H): rectangle" },
    Schema { name: "visellipse", args: &[Id, Size, Size], doc: "visellipse(Id,W,H): ellipse in a W×H box" },
    Schema { name: "visline", args: &[Id, Int, Int, Int, Int], doc: "visline(Id,X1,Y1,X2,Y2): line segment" },
    Schema { name: "vispolygon", args: &[Id, Int, Int, Int], doc: "vispolygon(Id,Idx,X,Y): vertex Idx of a polygon" },
    Schema { name: "vislabel", args: &[Id, Text], doc: "vislabel(Id,Text): text of an element, or a free label" },
    Schema { name: "visimage", args: &[Id, Text], doc: "visimage(Id,Path): image" },
    Schema { name: "visposition", args: &[Id, Int, Int], doc: "visposition(Id,X,Y): top-left corner or origin" },
    Schema { name: "viscolor", args: &[Id, Color], doc: "viscolor(Id,Color)" },
    Schema { name: "viszorder", args: &[Id, Int], doc: "viszorder(Id,Z): higher draws later" },
    Schema { name: "visgrid", args: &[Id, Positive, Positive, Positive, Positive], doc: "visgrid(Id,Rows,Cols,CellW,CellH)" },
    Schema { name: "visfillgrid", args: &[Id, Positive, Positive, Id], doc: "visfillgrid(GridId,Row,Col,ElemId): place an element in a cell" },
    Schema { name: "visgraph", args: &[Id], doc: "visgraph(Id): container for nodes and edges" },
    Schema { name: "visnode", args: &[Id, Id], doc: "visnode(Id,GraphId)" },
    Schema { name: "visedge", args: &[Id, Id, Id, Id], doc: "visedge(Id,FromId,ToId,GraphId)" },
];

pub fn schema(name: &str) -> Option<&'static Schema> {
    SCHEMAS.iter().find(|s| s.name == name)
}

pub fn is_vis_predicate(name: &str) -> bool {
    name.starts_with(PREFIX)
}

fn is_color(v: &Value) -> bool {
    match v {
        Value::Symbol(s) => s.chars().all(|c| c.is_ascii_alphabetic()),
        Value::String(s) => {
            s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
        }
        _ => false,
    }
}

fn arg_ok(kind: ArgKind, v: &Value) -> Result<(), &'static str> {
    let ok = match kind {
        Id => true,
        Int => v.as_int().is_some(),
        Positive => v.as_int().is_some_and(|n| n >= 1),
        Size => v.as_int().is_some_and(|n| n >= 0),
        Text => matches!(v, Value::Symbol(_) | Value::String(_) | Value::Integer(_)),
        Color => is_color(v),
    };
    if ok {
        return Ok(());
    }
    Err(match kind {
        Id => unreachable!(),
        Int => "expected an integer",
        Positive => "expected an integer of at least 1",
        Size => "expected a non-negative integer",
        Text => "expected a symbol or string",
        Color => "expected a colour name or \"#RRGGBB\"",
    })
}

pub fn check_atom(l: &GroundLiteral) -> Result<(), VizError> {
    let err = |message: String| VizError::Vocabulary {
        atom: l.to_string(),
        message,
    };
    let Some(s) = schema(&l.predicate) else {
        return Err(err(format!("unknown visualization predicate {}/{}", l.predicate, l.args.len())));
    };
    if l.strong_negation {
        return Err(err("visualization atoms cannot be strongly negated".into()));
    }
    if l.args.len() != s.args.len() {
        return Err(err(format!(
            "{} takes {} arguments, found {}",
            s.name,
            s.args.len(),
            l.args.len()
        )));
    }
    for (i, (kind, v)) in s.args.iter().zip(&l.args).enumerate() {
        arg_ok(*kind, v).map_err(|m| err(format!("argument {}: {m}", i + 1)))?;
    }
    Ok(())
}

/// Text of a symbol or string argument without quotes.
pub fn text_of(v: &Value) -> String {
    match v {
        Value::String(s) | Value::Symbol(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Vocabulary atoms of an interpretation, each checked against its schema.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VisAtomSet(Interpretation);

impl VisAtomSet {
    /// Keeps the `vis*` literals of `interpretation` and validates them.
    pub fn project(interpretation: &Interpretation) -> Result<Self, VizError> {
        let atoms = interpretation.project(|l| is_vis_predicate(&l.predicate));
        Self::new(atoms)
    }

    /// Fails on any literal outside the vocabulary.
    pub fn new(atoms: Interpretation) -> Result<Self, VizError> {
        for l in atoms.iter() {
            check_atom(l)?;
        }
        Ok(Self(atoms))
    }

    pub fn from_literals(atoms: impl IntoIterator<Item = GroundLiteral>) -> Result<Self, VizError> {
        let mut i = Interpretation::new();
        for a in atoms {
            i.insert(a).map_err(|e| VizError::Vocabulary {
                atom: e.to_string(),
                message: "inconsistent".into(),
            })?;
        }
        Self::new(i)
    }

    pub fn atoms(&self) -> &Interpretation {
        &self.0
    }

    pub fn into_interpretation(self) -> Interpretation {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundLiteral> {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use aspwb_core::parse::parse_interpretation;
    use aspwb_core::Dialect;

    fn atoms(text: &str) -> Interpretation {
        parse_interpretation(text, Dialect::Gringo).unwrap()
    }

    #[test]
    fn wrong_arity_is_named() {
        let err = VisAtomSet::new(atoms("visrect(b,1)")).unwrap_err();
        assert_eq!(err.code(), "vocabulary-error");
        assert!(err.to_string().contains("visrect(b,1)"));
    }

    #[test]
    fn projection_drops_other_predicates() {
        let v = VisAtomSet::project(&atoms("q(1,2) visrect(b,10,10)")).unwrap();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn colours() {
        assert!(VisAtomSet::new(atoms("viscolor(b,red) viscolor(c,\"#00ff00\")")).is_ok());
        assert!(VisAtomSet::new(atoms("viscolor(b,\"green\")")).is_err());
        assert!(VisAtomSet::new(atoms("visgrid(g,0,2,1,1)")).is_err());
    }
}
