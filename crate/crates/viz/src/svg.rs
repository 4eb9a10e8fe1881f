//! SVG 1.1 serialisation. Each element becomes one `<g>` carrying its id and
//! kind, written in paint order.

use std::fmt::Write;

use crate::scene::{ElementKind, Scene, SceneElement};

const DEFAULT_FILL: &str = "none";
const DEFAULT_STROKE: &str = "black";
const NODE_FILL: &str = "white";
const FONT_SIZE: f64 = 12.0;

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Shortest text that reads back to the same number; integers print bare.
fn num(n: f64) -> String {
    if n == n.trunc() && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

fn text(out: &mut String, x: f64, y: f64, s: &str, fill: &str) {
    let _ = write!(
        out,
        r#"<text x="{}" y="{}" font-size="{}" text-anchor="middle" dominant-baseline="central" fill="{fill}">{}</text>"#,
        num(x),
        num(y),
        num(FONT_SIZE),
        esc(s)
    );
}

fn element(out: &mut String, e: &SceneElement) {
    let g = &e.geometry;
    let colour = e.style.color.as_deref().map(esc);
    let fill = colour.as_deref().unwrap_or(DEFAULT_FILL);
    let w = g.width.unwrap_or(0.0);
    let h = g.height.unwrap_or(0.0);
    let _ = write!(out, r#"<g data-id="{}" data-kind="{}">"#, esc(&e.id), e.kind.as_str());
    match e.kind {
        ElementKind::Rect => {
            let _ = write!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="{DEFAULT_STROKE}"/>"#,
                num(g.x),
                num(g.y),
                num(w),
                num(h)
            );
        }
        ElementKind::Ellipse | ElementKind::GraphNode => {
            let fill = colour.as_deref().unwrap_or(if e.kind == ElementKind::GraphNode {
                NODE_FILL
            } else {
                DEFAULT_FILL
            });
            let _ = write!(
                out,
                r#"<ellipse cx="{}" cy="{}" rx="{}" ry="{}" fill="{fill}" stroke="{DEFAULT_STROKE}"/>"#,
                num(g.x + w / 2.0),
                num(g.y + h / 2.0),
                num(w / 2.0),
                num(h / 2.0)
            );
        }
        ElementKind::Line | ElementKind::GraphEdge => {
            let stroke = colour.as_deref().unwrap_or(DEFAULT_STROKE);
            let (x2, y2) = (g.x2.unwrap_or(g.x), g.y2.unwrap_or(g.y));
            let _ = write!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}"/>"#,
                num(g.x),
                num(g.y),
                num(x2),
                num(y2)
            );
        }
        ElementKind::Polygon => {
            let pts: Vec<String> = g.points.iter().map(|[x, y]| format!("{},{}", num(*x), num(*y))).collect();
            let _ = write!(
                out,
                r#"<polygon points="{}" fill="{fill}" stroke="{DEFAULT_STROKE}"/>"#,
                pts.join(" ")
            );
        }
        ElementKind::Label => {}
        ElementKind::Image => {
            let _ = write!(
                out,
                r#"<image x="{}" y="{}" width="{}" height="{}" href="{}"/>"#,
                num(g.x),
                num(g.y),
                num(w),
                num(h),
                esc(e.text.as_deref().unwrap_or(""))
            );
        }
        ElementKind::Grid => {
            let (rows, cols) = (g.rows.unwrap_or(0), g.cols.unwrap_or(0));
            let (cw, ch) = (g.cell_width.unwrap_or(0.0), g.cell_height.unwrap_or(0.0));
            for r in 0..rows {
                for c in 0..cols {
                    let _ = write!(
                        out,
                        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="{DEFAULT_STROKE}"/>"#,
                        num(g.x + c as f64 * cw),
                        num(g.y + r as f64 * ch),
                        num(cw),
                        num(ch)
                    );
                }
            }
        }
        ElementKind::Graph => {}
    }
    if let Some(t) = &e.text {
        match e.kind {
            ElementKind::Label => text(out, g.x, g.y, t, colour.as_deref().unwrap_or(DEFAULT_STROKE)),
            ElementKind::GraphEdge => {
                // Near the far end, where the argument position matters.
                let (x2, y2) = (g.x2.unwrap_or(g.x), g.y2.unwrap_or(g.y));
                text(out, g.x + (x2 - g.x) * 0.75, g.y + (y2 - g.y) * 0.75, t, DEFAULT_STROKE)
            }
            ElementKind::Image => {}
            _ => text(out, g.x + w / 2.0, g.y + h / 2.0, t, DEFAULT_STROKE),
        }
    }
    out.push_str("</g>\n");
}

pub fn export_svg(scene: &Scene) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let (w, h) = (num(scene.canvas.width), num(scene.canvas.height));
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    if !scene.is_empty() {
        out.push('\n');
    }
    for e in scene.draw_order() {
        element(&mut out, e);
    }
    out.push_str("</svg>\n");
    out
}
