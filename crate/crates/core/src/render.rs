//! Polygon drawings as SVG, TikZ and Graphviz text.
//!
//! Vertex 1 sits at the top of the unit circle and labels run clockwise.
//! Output is byte-for-byte deterministic for a given drawing.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::diagset::DiagSet;
use crate::polygon::{Diagonal, Polygon, PolygonSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChordRole {
    /// In `nc(S)` but not in `S`; only drawn on request.
    Nc,
    Member,
    Frame,
    Cut,
}

impl ChordRole {
    fn class(self) -> &'static str {
        match self {
            ChordRole::Nc => "nc",
            ChordRole::Member => "member",
            ChordRole::Frame => "frame",
            ChordRole::Cut => "cut",
        }
    }

    fn colour(self) -> &'static str {
        match self {
            ChordRole::Nc => "#4a9a4a",
            ChordRole::Member => "#000000",
            ChordRole::Frame => "#1f5fbf",
            ChordRole::Cut => "#d01c1c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Highlight {
    #[default]
    None,
    Frame,
    Nc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drawing {
    pub spec: PolygonSpec,
    /// Sorted by role, then by diagonal.
    pub chords: Vec<(Diagonal, ChordRole)>,
}

impl Drawing {
    pub fn new(poly: &Polygon, members: &DiagSet, cut: &DiagSet, highlight: Highlight) -> Drawing {
        let frame = poly.frame(members);
        let mut chords = Vec::new();
        for r in members {
            let role = if cut.contains(r) {
                ChordRole::Cut
            } else if highlight == Highlight::Frame && frame.contains(r) {
                ChordRole::Frame
            } else {
                ChordRole::Member
            };
            chords.push((poly.diagonals()[r], role));
        }
        for r in &cut.difference(members) {
            chords.push((poly.diagonals()[r], ChordRole::Cut));
        }
        if highlight == Highlight::Nc {
            for r in &poly.nc(members).difference(members) {
                chords.push((poly.diagonals()[r], ChordRole::Nc));
            }
        }
        chords.sort_by_key(|&(d, role)| (role, d));
        Drawing {
            spec: poly.spec(),
            chords,
        }
    }
}

fn num(x: f64) -> String {
    let v = (x * 10_000.0).round() / 10_000.0;
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.4}")
    }
}

/// Screen coordinates (y down) of vertex `k`.
fn vertex_xy(spec: PolygonSpec, k: u32, radius: f64) -> (f64, f64) {
    let theta = 2.0 * PI * (k - 1) as f64 / spec.vertices() as f64;
    (radius * theta.sin(), -radius * theta.cos())
}

pub fn svg(drawing: &Drawing) -> String {
    let spec = drawing.spec;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.25 -1.25 2.5 2.5" width="480" height="480">"#
    );
    let _ = writeln!(
        out,
        "  <title>n={} m={}: {}-gon</title>",
        spec.n(),
        spec.m(),
        spec.vertices()
    );
    let points: Vec<String> = (1..=spec.vertices())
        .map(|k| {
            let (x, y) = vertex_xy(spec, k, 1.0);
            format!("{},{}", num(x), num(y))
        })
        .collect();
    let _ = writeln!(
        out,
        r##"  <polygon class="boundary" points="{}" fill="none" stroke="#000000" stroke-width="0.01"/>"##,
        points.join(" ")
    );
    out.push_str("  <g class=\"chords\">\n");
    for &(d, role) in &drawing.chords {
        let (x1, y1) = vertex_xy(spec, d.a(), 1.0);
        let (x2, y2) = vertex_xy(spec, d.b(), 1.0);
        let width = if role == ChordRole::Member { "0.012" } else { "0.02" };
        let dash = if role == ChordRole::Nc {
            r#" stroke-dasharray="0.04 0.03""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"    <line class="{}" data-diagonal="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}"{}/>"#,
            role.class(),
            d,
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            role.colour(),
            width,
            dash
        );
    }
    out.push_str("  </g>\n");
    out.push_str("  <g class=\"labels\" font-family=\"serif\" font-size=\"0.09\" text-anchor=\"middle\" dominant-baseline=\"central\">\n");
    for k in 1..=spec.vertices() {
        let (x, y) = vertex_xy(spec, k, 1.12);
        let _ = writeln!(out, r#"    <text x="{}" y="{}">{}</text>"#, num(x), num(y), k);
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

pub fn tikz(drawing: &Drawing) -> String {
    let spec = drawing.spec;
    let pos = |k: u32, r: f64| {
        let (x, y) = vertex_xy(spec, k, r);
        format!("({},{})", num(x), num(-y))
    };
    let mut out = String::from("\\begin{tikzpicture}[scale=2]\n");
    let corners: Vec<String> = (1..=spec.vertices()).map(|k| pos(k, 1.0)).collect();
    let _ = writeln!(out, "\\draw {} -- cycle;", corners.join(" -- "));
    for k in 1..=spec.vertices() {
        let _ = writeln!(out, "\\draw {} node {{${k}$}};", pos(k, 1.12));
    }
    for &(d, role) in &drawing.chords {
        let style = match role {
            ChordRole::Member => "",
            ChordRole::Frame => "[blue, thick]",
            ChordRole::Cut => "[red]",
            ChordRole::Nc => "[green!50!black, dashed]",
        };
        let _ = writeln!(out, "\\draw{} {}--{};", style, pos(d.a(), 1.0), pos(d.b(), 1.0));
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

pub fn dot(drawing: &Drawing) -> String {
    let spec = drawing.spec;
    let mut out = String::new();
    let _ = writeln!(out, "graph polygon_{}_{} {{", spec.n(), spec.m());
    out.push_str("  node [shape=circle, width=0.3, fixedsize=true];\n");
    for k in 1..=spec.vertices() {
        let (x, y) = vertex_xy(spec, k, 3.0);
        let _ = writeln!(out, "  v{k} [label=\"{k}\", pos=\"{},{}!\"];", num(x), num(-y));
    }
    for k in 1..=spec.vertices() {
        let next = spec.wrap(k as i64 + 1);
        let _ = writeln!(out, "  v{k} -- v{next} [color=\"#999999\"];");
    }
    for &(d, role) in &drawing.chords {
        let style = if role == ChordRole::Nc { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  v{} -- v{} [class=\"{}\", color=\"{}\"{}];",
            d.a(),
            d.b(),
            role.class(),
            role.colour(),
            style
        );
    }
    out.push_str("}\n");
    out
}
