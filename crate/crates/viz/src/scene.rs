use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::VizError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementKind {
    Rect,
    Ellipse,
    Line,
    Polygon,
    Label,
    Image,
    GraphNode,
    GraphEdge,
    Grid,
    /// Container introduced by `visgraph`; drawn as nothing.
    Graph,
}

impl ElementKind {
    /// Tie-break for equal z: containers first, labels last.
    fn layer(self) -> u8 {
        match self {
            ElementKind::Grid | ElementKind::Graph => 0,
            ElementKind::GraphEdge | ElementKind::Line => 1,
            ElementKind::Rect | ElementKind::Ellipse | ElementKind::Polygon | ElementKind::Image => 2,
            ElementKind::GraphNode => 3,
            ElementKind::Label => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Rect => "rect",
            ElementKind::Ellipse => "ellipse",
            ElementKind::Line => "line",
            ElementKind::Polygon => "polygon",
            ElementKind::Label => "label",
            ElementKind::Image => "image",
            ElementKind::GraphNode => "graph-node",
            ElementKind::GraphEdge => "graph-edge",
            ElementKind::Grid => "grid",
            ElementKind::Graph => "graph",
        }
    }
}

/// Resolved, absolute geometry. Which fields are set depends on the kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    /// Line end point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y2: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_height: Option<f64>,
    /// Edge endpoints as element ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
}

impl Geometry {
    pub fn at(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            ..Self::default()
        }
    }

    pub fn sized(x: f64, y: f64, width: f64, height: f64) -> Self {
        Self {
            width: Some(width),
            height: Some(height),
            ..Self::at(x, y)
        }
    }

    fn numbers(&self) -> Vec<f64> {
        let mut v = vec![self.x, self.y];
        v.extend(self.width);
        v.extend(self.height);
        v.extend(self.x2);
        v.extend(self.y2);
        v.extend(self.cell_width);
        v.extend(self.cell_height);
        v.extend(self.points.iter().flatten());
        v
    }

    /// Lower-right corner of the bounding box.
    pub fn extent(&self) -> (f64, f64) {
        let mut mx = self.x + self.width.unwrap_or(0.0);
        let mut my = self.y + self.height.unwrap_or(0.0);
        if let (Some(x2), Some(y2)) = (self.x2, self.y2) {
            mx = mx.max(x2);
            my = my.max(y2);
        }
        for [px, py] in &self.points {
            mx = mx.max(*px);
            my = my.max(*py);
        }
        (mx, my)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Style {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
    #[serde(default)]
    pub z: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parent {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneElement {
    pub id: String,
    pub kind: ElementKind,
    pub geometry: Geometry,
    #[serde(default)]
    pub style: Style,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<Parent>,
}

impl SceneElement {
    pub fn new(id: impl Into<String>, kind: ElementKind, geometry: Geometry) -> Self {
        Self {
            id: id.into(),
            kind,
            geometry,
            style: Style::default(),
            text: None,
            parent: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
}

pub const MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub canvas: Canvas,
    /// Sorted by id.
    pub elements: Vec<SceneElement>,
}

impl Scene {
    pub fn new(mut elements: Vec<SceneElement>) -> Self {
        elements.sort_by(|a, b| a.id.cmp(&b.id));
        let mut s = Self {
            canvas: Canvas::default(),
            elements,
        };
        s.fit_canvas();
        s
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&SceneElement> {
        self.elements
            .binary_search_by(|e| e.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.elements[i])
    }

    pub fn count(&self, kind: ElementKind) -> usize {
        self.elements.iter().filter(|e| e.kind == kind).count()
    }

    /// Elements in paint order: z, then layer, then id.
    pub fn draw_order(&self) -> Vec<&SceneElement> {
        let mut v: Vec<&SceneElement> = self.elements.iter().collect();
        v.sort_by(|a, b| {
            (a.style.z, a.kind.layer(), &a.id).cmp(&(b.style.z, b.kind.layer(), &b.id))
        });
        v
    }

    /// Sets the canvas to enclose every element plus a margin.
    pub fn fit_canvas(&mut self) {
        let (mut w, mut h) = (0.0f64, 0.0f64);
        for e in &self.elements {
            let (x, y) = e.geometry.extent();
            w = w.max(x);
            h = h.max(y);
        }
        self.canvas = if self.elements.is_empty() {
            Canvas::default()
        } else {
            Canvas {
                width: (w + MARGIN).ceil(),
                height: (h + MARGIN).ceil(),
            }
        };
    }

    pub fn validate(&self) -> Result<(), VizError> {
        let mut ids = BTreeSet::new();
        for e in &self.elements {
            if !ids.insert(e.id.as_str()) {
                return Err(VizError::Conflict {
                    id: e.id.clone(),
                    message: "duplicate element id".into(),
                });
            }
        }
        let conflict = |id: &str, message: &str| VizError::Conflict {
            id: id.to_string(),
            message: message.to_string(),
        };
        for e in &self.elements {
            if e.geometry.numbers().iter().any(|n| !n.is_finite()) {
                return Err(conflict(&e.id, "geometry is not finite"));
            }
            let refs = e
                .parent
                .iter()
                .map(|p| &p.id)
                .chain(e.geometry.from.iter())
                .chain(e.geometry.to.iter());
            for r in refs {
                if !ids.contains(r.as_str()) {
                    return Err(VizError::DanglingReference {
                        id: r.clone(),
                        atom: e.id.clone(),
                    });
                }
            }
            match e.kind {
                ElementKind::Polygon if e.geometry.points.len() < 3 => {
                    return Err(conflict(&e.id, "a polygon needs at least 3 vertices"))
                }
                ElementKind::Grid
                    if e.geometry.rows.unwrap_or(0) < 1 || e.geometry.cols.unwrap_or(0) < 1 =>
                {
                    return Err(conflict(&e.id, "a grid needs at least one row and column"))
                }
                _ => {}
            }
        }
        Ok(())
    }
}
