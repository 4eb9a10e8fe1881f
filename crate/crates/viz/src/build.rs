//! Vocabulary atoms to scene.

use std::collections::{BTreeMap, BTreeSet};

use aspwb_core::{GroundLiteral, Value};

use crate::layout::force_layout;
use crate::scene::{ElementKind, Geometry, Parent, Scene, SceneElement};
use crate::vocab::{text_of, VisAtomSet};
use crate::VizError;

pub const IMAGE_SIZE: f64 = 40.0;
pub const NODE_SIZE: f64 = 30.0;
const GRAPH_SPACING: f64 = 80.0;

#[derive(Debug, Clone)]
enum Shape {
    Rect(i64, i64),
    Ellipse(i64, i64),
    Line(i64, i64, i64, i64),
    Polygon(BTreeMap<i64, (i64, i64)>),
    Label,
    Image(String),
    Grid { rows: i64, cols: i64, cw: i64, ch: i64 },
    Graph,
    Node(String),
    Edge { from: String, to: String, graph: String },
}

impl Shape {
    fn kind(&self) -> ElementKind {
        match self {
            Shape::Rect(..) => ElementKind::Rect,
            Shape::Ellipse(..) => ElementKind::Ellipse,
            Shape::Line(..) => ElementKind::Line,
            Shape::Polygon(_) => ElementKind::Polygon,
            Shape::Label => ElementKind::Label,
            Shape::Image(_) => ElementKind::Image,
            Shape::Grid { .. } => ElementKind::Grid,
            Shape::Graph => ElementKind::Graph,
            Shape::Node(_) => ElementKind::GraphNode,
            Shape::Edge { .. } => ElementKind::GraphEdge,
        }
    }
}

#[derive(Debug, Default)]
struct Attrs {
    position: Option<(i64, i64)>,
    color: Option<String>,
    z: Option<i64>,
    label: Option<String>,
    cell: Option<(String, i64, i64)>,
}

fn int(v: &Value) -> i64 {
    v.as_int().expect("schema-checked integer")
}

fn conflict(id: &str, message: impl Into<String>) -> VizError {
    VizError::Conflict {
        id: id.to_string(),
        message: message.into(),
    }
}

fn set_once<T: PartialEq>(slot: &mut Option<T>, value: T, id: &str, what: &str) -> Result<(), VizError> {
    match slot {
        Some(old) if *old != value => Err(conflict(id, format!("more than one {what}"))),
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

pub fn build_scene(atoms: &VisAtomSet) -> Result<Scene, VizError> {
    let mut shapes: BTreeMap<String, (Shape, String)> = BTreeMap::new();
    let mut attrs: BTreeMap<String, Attrs> = BTreeMap::new();
    let mut deferred: Vec<&GroundLiteral> = Vec::new();

    for l in atoms.iter() {
        let id = l.args[0].to_string();
        let shape = match l.predicate.as_str() {
            "visrect" => Shape::Rect(int(&l.args[1]), int(&l.args[2])),
            "visellipse" => Shape::Ellipse(int(&l.args[1]), int(&l.args[2])),
            "visline" => Shape::Line(int(&l.args[1]), int(&l.args[2]), int(&l.args[3]), int(&l.args[4])),
            "vispolygon" => {
                let vertex = (int(&l.args[2]), int(&l.args[3]));
                let idx = int(&l.args[1]);
                match shapes.get_mut(&id) {
                    Some((Shape::Polygon(vs), _)) => {
                        if vs.insert(idx, vertex).is_some_and(|old| old != vertex) {
                            return Err(conflict(&id, format!("vertex {idx} given twice")));
                        }
                        continue;
                    }
                    _ => Shape::Polygon(BTreeMap::from([(idx, vertex)])),
                }
            }
            "visimage" => Shape::Image(text_of(&l.args[1])),
            "visgrid" => Shape::Grid {
                rows: int(&l.args[1]),
                cols: int(&l.args[2]),
                cw: int(&l.args[3]),
                ch: int(&l.args[4]),
            },
            "visgraph" => Shape::Graph,
            "visnode" => Shape::Node(l.args[1].to_string()),
            "visedge" => Shape::Edge {
                from: l.args[1].to_string(),
                to: l.args[2].to_string(),
                graph: l.args[3].to_string(),
            },
            _ => {
                deferred.push(l);
                continue;
            }
        };
        if let Some((_, first)) = shapes.get(&id) {
            return Err(conflict(&id, format!("defined by both `{first}` and `{l}`")));
        }
        shapes.insert(id, (shape, l.to_string()));
    }

    // Free labels are elements of their own.
    for l in &deferred {
        if l.predicate == "vislabel" {
            let id = l.args[0].to_string();
            let a = attrs.entry(id.clone()).or_default();
            set_once(&mut a.label, text_of(&l.args[1]), &id, "label")?;
            shapes.entry(id).or_insert_with(|| (Shape::Label, l.to_string()));
        }
    }
    for l in &deferred {
        let id = l.args[0].to_string();
        let dangling = |id: &str| VizError::DanglingReference {
            id: id.to_string(),
            atom: l.to_string(),
        };
        match l.predicate.as_str() {
            "vislabel" => {}
            "visfillgrid" => {
                let elem = l.args[3].to_string();
                let (row, col) = (int(&l.args[1]), int(&l.args[2]));
                match shapes.get(&id) {
                    None => return Err(dangling(&id)),
                    Some((Shape::Grid { rows, cols, .. }, _)) => {
                        if row > *rows || col > *cols {
                            return Err(conflict(&id, format!("cell ({row},{col}) outside a {rows}x{cols} grid")));
                        }
                    }
                    Some(_) => return Err(conflict(&id, format!("`{l}` needs a grid"))),
                }
                if !shapes.contains_key(&elem) {
                    return Err(dangling(&elem));
                }
                let a = attrs.entry(elem.clone()).or_default();
                set_once(&mut a.cell, (id, row, col), &elem, "grid cell")?;
            }
            other => {
                if !shapes.contains_key(&id) {
                    return Err(dangling(&id));
                }
                let a = attrs.entry(id.clone()).or_default();
                match other {
                    "visposition" => set_once(&mut a.position, (int(&l.args[1]), int(&l.args[2])), &id, "position")?,
                    "viscolor" => set_once(&mut a.color, text_of(&l.args[1]), &id, "colour")?,
                    "viszorder" => set_once(&mut a.z, int(&l.args[1]), &id, "z-order")?,
                    _ => unreachable!("vocabulary is closed"),
                }
            }
        }
    }

    for (id, (shape, atom)) in &shapes {
        let check = |r: &String, want: ElementKind| match shapes.get(r) {
            None => Err(VizError::DanglingReference {
                id: r.clone(),
                atom: atom.clone(),
            }),
            Some((s, _)) if s.kind() != want => {
                Err(conflict(id, format!("`{r}` is not a {}", want.as_str())))
            }
            _ => Ok(()),
        };
        match shape {
            Shape::Node(g) => check(g, ElementKind::Graph)?,
            Shape::Edge { from, to, graph } => {
                check(graph, ElementKind::Graph)?;
                check(from, ElementKind::GraphNode)?;
                check(to, ElementKind::GraphNode)?;
            }
            Shape::Polygon(vs) if vs.len() < 3 => {
                return Err(conflict(id, "a polygon needs at least 3 vertices"))
            }
            _ => {}
        }
    }

    let origins = Origins::resolve(&shapes, &attrs)?;
    let empty = Attrs::default();
    let mut elements = Vec::with_capacity(shapes.len());
    for (id, (shape, _)) in &shapes {
        let a = attrs.get(id).unwrap_or(&empty);
        let (x, y) = origins.of(id);
        let mut parent = a.cell.as_ref().map(|(g, r, c)| Parent {
            id: g.clone(),
            row: Some(*r as u32),
            col: Some(*c as u32),
        });
        let geometry = match shape {
            Shape::Rect(w, h) | Shape::Ellipse(w, h) => Geometry::sized(x, y, *w as f64, *h as f64),
            Shape::Image(_) => Geometry::sized(x, y, IMAGE_SIZE, IMAGE_SIZE),
            Shape::Label | Shape::Graph => {
                let mut g = Geometry::at(x, y);
                if matches!(shape, Shape::Graph) {
                    let side = origins.graph_side(id);
                    g.width = Some(side);
                    g.height = Some(side);
                }
                g
            }
            Shape::Line(x1, y1, x2, y2) => {
                let mut g = Geometry::at(x + *x1 as f64, y + *y1 as f64);
                g.x2 = Some(x + *x2 as f64);
                g.y2 = Some(y + *y2 as f64);
                g
            }
            Shape::Polygon(vs) => {
                let mut g = Geometry::at(x, y);
                g.points = vs.values().map(|(px, py)| [x + *px as f64, y + *py as f64]).collect();
                g
            }
            Shape::Grid { rows, cols, cw, ch } => {
                let mut g = Geometry::sized(x, y, (cols * cw) as f64, (rows * ch) as f64);
                g.rows = Some(*rows as u32);
                g.cols = Some(*cols as u32);
                g.cell_width = Some(*cw as f64);
                g.cell_height = Some(*ch as f64);
                g
            }
            Shape::Node(graph) => {
                parent.get_or_insert(Parent {
                    id: graph.clone(),
                    row: None,
                    col: None,
                });
                Geometry::sized(x, y, NODE_SIZE, NODE_SIZE)
            }
            Shape::Edge { from, to, graph } => {
                parent.get_or_insert(Parent {
                    id: graph.clone(),
                    row: None,
                    col: None,
                });
                let (fx, fy) = origins.of(from);
                let (tx, ty) = origins.of(to);
                let half = NODE_SIZE / 2.0;
                let mut g = Geometry::at(fx + half, fy + half);
                g.x2 = Some(tx + half);
                g.y2 = Some(ty + half);
                g.from = Some(from.clone());
                g.to = Some(to.clone());
                g
            }
        };
        let mut e = SceneElement::new(id.clone(), shape.kind(), geometry);
        e.style.color = a.color.clone();
        e.style.z = a.z.unwrap_or(0);
        e.text = match shape {
            Shape::Image(path) => Some(path.clone()),
            _ => a.label.clone(),
        };
        e.parent = parent;
        elements.push(e);
    }
    let scene = Scene::new(elements);
    scene.validate()?;
    Ok(scene)
}

/// Absolute top-left corners (or origins) of every element.
struct Origins {
    pos: BTreeMap<String, (f64, f64)>,
    sides: BTreeMap<String, f64>,
}

impl Origins {
    fn of(&self, id: &str) -> (f64, f64) {
        self.pos.get(id).copied().unwrap_or((0.0, 0.0))
    }

    fn graph_side(&self, id: &str) -> f64 {
        self.sides.get(id).copied().unwrap_or(0.0)
    }

    fn resolve(
        shapes: &BTreeMap<String, (Shape, String)>,
        attrs: &BTreeMap<String, Attrs>,
    ) -> Result<Self, VizError> {
        let mut o = Origins {
            pos: BTreeMap::new(),
            sides: BTreeMap::new(),
        };
        // Graph layouts first: a node's position depends on its graph's.
        let mut members: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        let mut links: BTreeMap<&str, Vec<(&str, &str)>> = BTreeMap::new();
        for (id, (shape, _)) in shapes {
            match shape {
                Shape::Node(g) => members.entry(g.as_str()).or_default().push(id),
                Shape::Edge { from, to, graph } => links.entry(graph.as_str()).or_default().push((from, to)),
                _ => {}
            }
        }
        let mut layout: BTreeMap<String, (f64, f64)> = BTreeMap::new();
        for (g, nodes) in &members {
            let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
            let edges: Vec<(usize, usize)> = links
                .get(g)
                .into_iter()
                .flatten()
                .filter_map(|(f, t)| Some((*index.get(f)?, *index.get(t)?)))
                .collect();
            let side = GRAPH_SPACING * (nodes.len() as f64).sqrt() + GRAPH_SPACING;
            let fixed: Vec<Option<(f64, f64)>> = vec![None; nodes.len()];
            let placed = force_layout(nodes.len(), &edges, &fixed, side, side);
            o.sides.insert(g.to_string(), side + NODE_SIZE);
            for (n, p) in nodes.iter().zip(placed) {
                layout.insert(n.to_string(), p);
            }
        }
        let mut visiting = BTreeSet::new();
        for id in shapes.keys() {
            o.visit(id, shapes, attrs, &layout, &mut visiting)?;
        }
        Ok(o)
    }

    fn visit(
        &mut self,
        id: &str,
        shapes: &BTreeMap<String, (Shape, String)>,
        attrs: &BTreeMap<String, Attrs>,
        layout: &BTreeMap<String, (f64, f64)>,
        visiting: &mut BTreeSet<String>,
    ) -> Result<(f64, f64), VizError> {
        if let Some(p) = self.pos.get(id) {
            return Ok(*p);
        }
        if !visiting.insert(id.to_string()) {
            return Err(conflict(id, "placement depends on itself"));
        }
        let a = attrs.get(id);
        // Explicit positions win over cells and layout.
        let p = if let Some((x, y)) = a.and_then(|a| a.position) {
            (x as f64, y as f64)
        } else if let Some((g, r, c)) = a.and_then(|a| a.cell.as_ref()) {
            let (gx, gy) = self.visit(g, shapes, attrs, layout, visiting)?;
            let Some((Shape::Grid { cw, ch, .. }, _)) = shapes.get(g) else {
                unreachable!("checked grid")
            };
            (gx + ((c - 1) * cw) as f64, gy + ((r - 1) * ch) as f64)
        } else if let Some((Shape::Node(g), _)) = shapes.get(id) {
            let (gx, gy) = self.visit(g, shapes, attrs, layout, visiting)?;
            let (lx, ly) = layout[id];
            (gx + lx, gy + ly)
        } else {
            (0.0, 0.0)
        };
        visiting.remove(id);
        self.pos.insert(id.to_string(), p);
        Ok(p)
    }
}
