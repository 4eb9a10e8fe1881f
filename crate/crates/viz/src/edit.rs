//! Scene edits expressed as changes to vocabulary atoms.

use std::collections::BTreeSet;

use aspwb_core::parse::parse_ground_term;
use aspwb_core::{GroundLiteral, Value};
use serde::{Deserialize, Serialize};

use crate::build::build_scene;
use crate::vocab::VisAtomSet;
use crate::VizError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Edit {
    /// New top-left corner. An element sitting in a grid snaps to the
    /// nearest cell when the point falls inside the grid.
    Move { id: String, x: i64, y: i64 },
    MoveToCell {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<String>,
        row: i64,
        col: i64,
    },
    /// Removes the element, its attributes, and anything that refers to it.
    Delete { id: String },
    Create { element: ElementSpec },
    Restyle {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        color: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<i64>,
    },
    Relabel { id: String, text: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeSpec {
    Rect { width: i64, height: i64 },
    Ellipse { width: i64, height: i64 },
    Line { x1: i64, y1: i64, x2: i64, y2: i64 },
    Polygon { points: Vec<[i64; 2]> },
    Label { text: String },
    Image { path: String },
    Grid { rows: i64, cols: i64, cell_width: i64, cell_height: i64 },
    Graph,
    GraphNode { graph: String },
    GraphEdge { from: String, to: String, graph: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRef {
    pub grid: String,
    pub row: i64,
    pub col: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSpec {
    pub id: String,
    #[serde(flatten)]
    pub shape: ShapeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<CellRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

const DEFINING: &[&str] = &[
    "visrect", "visellipse", "visline", "vispolygon", "vislabel", "visimage", "visgrid", "visgraph", "visnode",
    "visedge",
];

fn term(id: &str) -> Result<Value, VizError> {
    parse_ground_term(id).map_err(|e| VizError::InvalidEdit(format!("`{id}` is not a ground term: {e}")))
}

fn atom(p: &str, args: Vec<Value>) -> GroundLiteral {
    GroundLiteral::new(p, args)
}

/// A symbol when the text is a plain identifier, a string otherwise.
fn text_value(s: &str) -> Value {
    let mut cs = s.chars();
    let ident = cs.next().is_some_and(|c| c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "not";
    if ident {
        Value::Symbol(s.to_string())
    } else {
        Value::String(s.to_string())
    }
}

fn colour_value(s: &str) -> Value {
    if s.starts_with('#') {
        Value::String(s.to_string())
    } else {
        Value::Symbol(s.to_string())
    }
}

struct Atoms(BTreeSet<GroundLiteral>);

impl Atoms {
    fn exists(&self, id: &Value) -> bool {
        self.0.iter().any(|l| DEFINING.contains(&l.predicate.as_str()) && l.args[0] == *id)
    }

    fn find(&self, predicate: &str, id: &Value) -> Option<GroundLiteral> {
        self.0.iter().find(|l| l.predicate == predicate && l.args[0] == *id).cloned()
    }

    fn cell_of(&self, id: &Value) -> Option<GroundLiteral> {
        self.0.iter().find(|l| l.predicate == "visfillgrid" && l.args[3] == *id).cloned()
    }

    fn replace(&mut self, predicate: &str, id: &Value, new: GroundLiteral) {
        self.0.retain(|l| !(l.predicate == predicate && l.args[0] == *id));
        self.0.insert(new);
    }
}

fn require(atoms: &Atoms, id: &str) -> Result<Value, VizError> {
    let v = term(id)?;
    if !atoms.exists(&v) {
        return Err(VizError::DanglingReference {
            id: id.to_string(),
            atom: "edit".into(),
        });
    }
    Ok(v)
}

fn grid_dims(atoms: &Atoms, grid: &Value) -> Result<(i64, i64), VizError> {
    match atoms.find("visgrid", grid) {
        Some(g) => Ok((g.args[1].as_int().unwrap_or(0), g.args[2].as_int().unwrap_or(0))),
        None => Err(VizError::DanglingReference {
            id: grid.to_string(),
            atom: "edit".into(),
        }),
    }
}

fn move_to_cell(atoms: &mut Atoms, id: &Value, grid: Value, row: i64, col: i64) -> Result<(), VizError> {
    let (rows, cols) = grid_dims(atoms, &grid)?;
    if !(1..=rows).contains(&row) || !(1..=cols).contains(&col) {
        return Err(VizError::InvalidEdit(format!("cell ({row},{col}) outside a {rows}x{cols} grid")));
    }
    atoms.0.retain(|l| !(l.predicate == "visfillgrid" && l.args[3] == *id));
    atoms.0.retain(|l| !(l.predicate == "visposition" && l.args[0] == *id));
    atoms
        .0
        .insert(atom("visfillgrid", vec![grid, Value::Integer(row), Value::Integer(col), id.clone()]));
    Ok(())
}

fn create(atoms: &mut Atoms, spec: &ElementSpec) -> Result<(), VizError> {
    let id = term(&spec.id)?;
    if atoms.exists(&id) {
        return Err(VizError::Conflict {
            id: spec.id.clone(),
            message: "an element with this id exists".into(),
        });
    }
    let i = Value::Integer;
    let mut add = |p: &str, rest: Vec<Value>| {
        let mut args = vec![id.clone()];
        args.extend(rest);
        atoms.0.insert(atom(p, args));
    };
    match &spec.shape {
        ShapeSpec::Rect { width, height } => add("visrect", vec![i(*width), i(*height)]),
        ShapeSpec::Ellipse { width, height } => add("visellipse", vec![i(*width), i(*height)]),
        ShapeSpec::Line { x1, y1, x2, y2 } => add("visline", vec![i(*x1), i(*y1), i(*x2), i(*y2)]),
        ShapeSpec::Polygon { points } => {
            for (k, [x, y]) in points.iter().enumerate() {
                add("vispolygon", vec![i(k as i64 + 1), i(*x), i(*y)]);
            }
        }
        ShapeSpec::Label { text } => add("vislabel", vec![text_value(text)]),
        ShapeSpec::Image { path } => add("visimage", vec![Value::String(path.clone())]),
        ShapeSpec::Grid { rows, cols, cell_width, cell_height } => {
            add("visgrid", vec![i(*rows), i(*cols), i(*cell_width), i(*cell_height)])
        }
        ShapeSpec::Graph => add("visgraph", vec![]),
        ShapeSpec::GraphNode { graph } => add("visnode", vec![term(graph)?]),
        ShapeSpec::GraphEdge { from, to, graph } => add("visedge", vec![term(from)?, term(to)?, term(graph)?]),
    }
    if let Some([x, y]) = spec.position {
        add("visposition", vec![i(x), i(y)]);
    }
    if let Some(c) = &spec.color {
        add("viscolor", vec![colour_value(c)]);
    }
    if let Some(z) = spec.z {
        add("viszorder", vec![i(z)]);
    }
    if let Some(t) = &spec.label {
        add("vislabel", vec![text_value(t)]);
    }
    if let Some(c) = &spec.cell {
        move_to_cell(atoms, &id, term(&c.grid)?, c.row, c.col)?;
    }
    Ok(())
}

fn delete(atoms: &mut Atoms, id: Value) {
    let mut gone = BTreeSet::from([id]);
    loop {
        let more: Vec<Value> = atoms
            .0
            .iter()
            .filter(|l| matches!(l.predicate.as_str(), "visnode" | "visedge"))
            .filter(|l| !gone.contains(&l.args[0]) && l.args[1..].iter().any(|a| gone.contains(a)))
            .map(|l| l.args[0].clone())
            .collect();
        if more.is_empty() {
            break;
        }
        gone.extend(more);
    }
    atoms.0.retain(|l| {
        let refers = l.predicate == "visfillgrid" && gone.contains(&l.args[3]);
        !gone.contains(&l.args[0]) && !refers
    });
}

pub fn apply_edit(atoms: &VisAtomSet, edit: &Edit) -> Result<VisAtomSet, VizError> {
    let mut a = Atoms(atoms.atoms().literals().clone());
    match edit {
        Edit::Move { id, x, y } => {
            let v = require(&a, id)?;
            let mut snapped = false;
            if let Some(cell) = a.cell_of(&v) {
                let scene = build_scene(atoms)?;
                let grid = scene.get(&cell.args[0].to_string()).map(|g| g.geometry.clone());
                if let Some(g) = grid {
                    let (cw, ch) = (g.cell_width.unwrap_or(1.0), g.cell_height.unwrap_or(1.0));
                    let col = ((*x as f64 - g.x) / cw).round() as i64 + 1;
                    let row = ((*y as f64 - g.y) / ch).round() as i64 + 1;
                    let (rows, cols) = (g.rows.unwrap_or(0) as i64, g.cols.unwrap_or(0) as i64);
                    if (1..=rows).contains(&row) && (1..=cols).contains(&col) {
                        move_to_cell(&mut a, &v, cell.args[0].clone(), row, col)?;
                        snapped = true;
                    }
                }
            }
            if !snapped {
                a.0.retain(|l| !(l.predicate == "visfillgrid" && l.args[3] == v));
                a.replace("visposition", &v, atom("visposition", vec![v.clone(), Value::Integer(*x), Value::Integer(*y)]));
            }
        }
        Edit::MoveToCell { id, grid, row, col } => {
            let v = require(&a, id)?;
            let g = match grid {
                Some(g) => term(g)?,
                None => match a.cell_of(&v) {
                    Some(c) => c.args[0].clone(),
                    None => return Err(VizError::InvalidEdit(format!("`{id}` is not in a grid"))),
                },
            };
            move_to_cell(&mut a, &v, g, *row, *col)?;
        }
        Edit::Delete { id } => {
            let v = require(&a, id)?;
            delete(&mut a, v);
        }
        Edit::Create { element } => create(&mut a, element)?,
        Edit::Restyle { id, color, z } => {
            let v = require(&a, id)?;
            if let Some(c) = color {
                a.replace("viscolor", &v, atom("viscolor", vec![v.clone(), colour_value(c)]));
            }
            if let Some(z) = z {
                a.replace("viszorder", &v, atom("viszorder", vec![v.clone(), Value::Integer(*z)]));
            }
        }
        Edit::Relabel { id, text } => {
            let v = require(&a, id)?;
            a.replace("vislabel", &v, atom("vislabel", vec![v.clone(), text_value(text)]));
        }
    }
    let out = VisAtomSet::from_literals(a.0)?;
    build_scene(&out)?;
    Ok(out)
}

pub fn apply_edits(atoms: &VisAtomSet, edits: &[Edit]) -> Result<VisAtomSet, VizError> {
    let mut cur = atoms.clone();
    for e in edits {
        cur = apply_edit(&cur, e)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use aspwb_core::parse::parse_interpretation;
    use aspwb_core::Dialect;

    fn vis(text: &str) -> VisAtomSet {
        VisAtomSet::new(parse_interpretation(text, Dialect::Gringo).unwrap()).unwrap()
    }

    fn text(v: &VisAtomSet) -> String {
        v.atoms().to_string()
    }

    #[test]
    fn move_rewrites_position() {
        let out = apply_edit(&vis("visrect(b,10,10) visposition(b,5,5)"), &Edit::Move { id: "b".into(), x: 7, y: 9 }).unwrap();
        assert_eq!(text(&out), "{visposition(b,7,9), visrect(b,10,10)}");
    }

    #[test]
    fn delete_removes_attributes() {
        let out = apply_edit(&vis("visrect(b,10,10) visposition(b,5,5)"), &Edit::Delete { id: "b".into() }).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn relabel_adds_label() {
        let out = apply_edit(&vis("visrect(b,10,10)"), &Edit::Relabel { id: "b".into(), text: "Box 1".into() }).unwrap();
        assert_eq!(text(&out), "{vislabel(b,\"Box 1\"), visrect(b,10,10)}");
    }

    #[test]
    fn unknown_and_duplicate_ids() {
        let base = vis("visrect(b,10,10)");
        assert_eq!(apply_edit(&base, &Edit::Delete { id: "x".into() }).unwrap_err().code(), "dangling-reference");
        let spec = ElementSpec {
            id: "b".into(),
            shape: ShapeSpec::Ellipse { width: 1, height: 1 },
            position: None,
            cell: None,
            color: None,
            z: None,
            label: None,
        };
        assert_eq!(apply_edit(&base, &Edit::Create { element: spec }).unwrap_err().code(), "conflict");
    }

    #[test]
    fn move_snaps_into_cells() {
        let base = vis("visgrid(g,2,2,20,20) visposition(g,100,0) visrect(r,18,18) visfillgrid(g,1,1,r)");
        let out = apply_edit(&base, &Edit::Move { id: "r".into(), x: 121, y: 19 }).unwrap();
        assert!(text(&out).contains("visfillgrid(g,2,2,r)"));
        let out = apply_edit(&base, &Edit::Move { id: "r".into(), x: 0, y: 0 }).unwrap();
        assert!(text(&out).contains("visposition(r,0,0)"));
        assert!(!text(&out).contains("visfillgrid"));
    }

    #[test]
    fn delete_cascades_through_graphs() {
        let base = vis("visgraph(g) visnode(a,g) visnode(b,g) visedge(e,a,b,g) visrect(r,1,1)");
        let out = apply_edit(&base, &Edit::Delete { id: "a".into() }).unwrap();
        assert_eq!(text(&out), "{visgraph(g), visnode(b,g), visrect(r,1,1)}");
    }

    #[test]
    fn edits_round_trip_json() {
        let e = Edit::MoveToCell { id: "queen(2)".into(), grid: None, row: 2, col: 3 };
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"op":"move_to_cell","id":"queen(2)","row":2,"col":3}"#);
        let spec: ElementSpec = serde_json::from_str(r#"{"id":"c","kind":"rect","width":3,"height":4,"color":"red"}"#).unwrap();
        let out = apply_edit(&VisAtomSet::default(), &Edit::Create { element: spec }).unwrap();
        assert_eq!(text(&out), "{viscolor(c,red), visrect(c,3,4)}");
    }
}
