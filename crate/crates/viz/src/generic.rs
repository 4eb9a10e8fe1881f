//! Hypergraph drawing of an arbitrary interpretation.
//!
//! Every individual is a node. Every literal is a coloured hub labelled with
//! its predicate, joined to the nodes of its arguments by connectors
//! labelled with the argument position. Element ids carry a prefix telling
//! the three apart: `node:`, `hub:` and `arg:`.

use std::collections::{BTreeMap, BTreeSet};

use aspwb_core::{Interpretation, PredicateSig, Value};

use crate::layout::force_layout;
use crate::scene::{ElementKind, Geometry, Parent, Scene, SceneElement, MARGIN};

pub const PALETTE: [&str; 12] = [
    "#1F77B4", "#FF7F0E", "#2CA02C", "#D62728", "#9467BD", "#8C564B", "#E377C2", "#7F7F7F",
    "#BCBD22", "#17BECF", "#393B79", "#AD494A",
];

pub const NODE_PREFIX: &str = "node:";
pub const HUB_PREFIX: &str = "hub:";
pub const ARG_PREFIX: &str = "arg:";

const NODE_SIZE: f64 = 30.0;
const HUB_SIZE: f64 = 20.0;
const SPACING: f64 = 80.0;

pub fn generic_scene(interpretation: &Interpretation) -> Scene {
    if interpretation.is_empty() {
        return Scene::default();
    }
    let individuals: BTreeSet<&Value> = interpretation.iter().flat_map(|l| l.args.iter()).collect();
    let node_index: BTreeMap<&Value, usize> =
        individuals.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let predicates: BTreeSet<PredicateSig> = interpretation.iter().map(|l| l.signature()).collect();
    let colour: BTreeMap<&PredicateSig, &str> = predicates
        .iter()
        .enumerate()
        .map(|(i, p)| (p, PALETTE[i % PALETTE.len()]))
        .collect();

    let n_nodes = individuals.len();
    let n = n_nodes + interpretation.len();
    let mut edges = Vec::new();
    for (h, l) in interpretation.iter().enumerate() {
        for a in &l.args {
            edges.push((n_nodes + h, node_index[a]));
        }
    }
    let side = SPACING * (n as f64).sqrt() + SPACING;
    let pos = force_layout(n, &edges, &[], side, side);
    let centre = |i: usize| (pos[i].0 + MARGIN + NODE_SIZE / 2.0, pos[i].1 + MARGIN + NODE_SIZE / 2.0);

    let mut elements = Vec::with_capacity(n + edges.len());
    for (v, &i) in &node_index {
        let (cx, cy) = centre(i);
        let mut e = SceneElement::new(
            format!("{NODE_PREFIX}{v}"),
            ElementKind::GraphNode,
            Geometry::sized(cx - NODE_SIZE / 2.0, cy - NODE_SIZE / 2.0, NODE_SIZE, NODE_SIZE),
        );
        e.text = Some(v.to_string());
        e.style.z = 1;
        elements.push(e);
    }
    for (h, l) in interpretation.iter().enumerate() {
        let hub_id = format!("{HUB_PREFIX}{l}");
        let (hx, hy) = centre(n_nodes + h);
        let mut hub = SceneElement::new(
            hub_id.clone(),
            ElementKind::GraphNode,
            Geometry::sized(hx - HUB_SIZE / 2.0, hy - HUB_SIZE / 2.0, HUB_SIZE, HUB_SIZE),
        );
        let sign = if l.strong_negation { "-" } else { "" };
        hub.text = Some(format!("{sign}{}", l.predicate));
        hub.style.color = Some(colour[&l.signature()].to_string());
        hub.style.z = 2;
        let hub_colour = hub.style.color.clone();
        elements.push(hub);
        for (k, a) in l.args.iter().enumerate() {
            let (nx, ny) = centre(node_index[a]);
            let mut g = Geometry::at(hx, hy);
            g.x2 = Some(nx);
            g.y2 = Some(ny);
            g.from = Some(hub_id.clone());
            g.to = Some(format!("{NODE_PREFIX}{a}"));
            let mut c = SceneElement::new(format!("{ARG_PREFIX}{l}:{}", k + 1), ElementKind::GraphEdge, g);
            c.text = Some((k + 1).to_string());
            c.style.color = hub_colour.clone();
            c.parent = Some(Parent {
                id: hub_id.clone(),
                row: None,
                col: None,
            });
            elements.push(c);
        }
    }
    Scene::new(elements)
}

pub fn is_hub(e: &SceneElement) -> bool {
    e.id.starts_with(HUB_PREFIX)
}

pub fn is_node(e: &SceneElement) -> bool {
    e.id.starts_with(NODE_PREFIX)
}
