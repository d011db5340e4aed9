//! Static SVG and DOT renderings of drawings and triangulations.
//!
//! Vertex `i` sits on the unit circle at angle `2πi/n`, counterclockwise from
//! the positive x-axis. Output is byte-deterministic.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::drawing::{ConvexDrawing, Vertex};
use crate::triangulation::Triangulation;

const SIZE: f64 = 400.0;
const RADIUS: f64 = 180.0;

/// Unit-circle coordinates of vertex `i`.
pub fn unit_circle_point(i: Vertex, n: usize) -> (f64, f64) {
    let theta = 2.0 * PI * i as f64 / n as f64;
    (theta.cos(), theta.sin())
}

fn canvas(i: Vertex, n: usize) -> (f64, f64) {
    let (x, y) = unit_circle_point(i, n);
    (SIZE / 2.0 + RADIUS * x, SIZE / 2.0 - RADIUS * y)
}

/// The drawing as SVG: edges as solid chords and, when `t` is given, its
/// inner links as dashed chords.
pub fn svg(d: &ConvexDrawing, t: Option<&Triangulation>) -> String {
    let n = d.n();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(
        s,
        "  <circle cx=\"{c:.4}\" cy=\"{c:.4}\" r=\"{RADIUS:.4}\" fill=\"none\" stroke=\"#cccccc\"/>",
        c = SIZE / 2.0
    );
    let line = |s: &mut String, a: Vertex, b: Vertex, class: &str, style: &str| {
        let ((x1, y1), (x2, y2)) = (canvas(a, n), canvas(b, n));
        let _ = writeln!(
            s,
            "  <line class=\"{class}\" x1=\"{x1:.4}\" y1=\"{y1:.4}\" x2=\"{x2:.4}\" y2=\"{y2:.4}\" {style}/>"
        );
    };
    for e in d.edges() {
        line(&mut s, e.lo(), e.hi(), "edge", "stroke=\"#000000\" stroke-width=\"1.5\"");
    }
    if let Some(t) = t {
        for l in t.inner_links() {
            line(
                &mut s,
                l.a(),
                l.b(),
                "link",
                "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"",
            );
        }
    }
    for i in 0..n as Vertex {
        let (x, y) = canvas(i, n);
        let _ = writeln!(s, "  <circle class=\"vertex\" cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"4.0000\" fill=\"#1f77b4\"/>");
        let (ux, uy) = unit_circle_point(i, n);
        let (lx, ly) = (SIZE / 2.0 + (RADIUS + 14.0) * ux, SIZE / 2.0 - (RADIUS + 14.0) * uy);
        let _ = writeln!(
            s,
            "  <text x=\"{lx:.4}\" y=\"{ly:.4}\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"middle\">{i}</text>"
        );
    }
    s.push_str("</svg>\n");
    s
}

/// The drawing in Graphviz syntax with pinned circle positions (for
/// `neato -n`); inner links of `t` are dashed.
pub fn drawing_dot(d: &ConvexDrawing, t: Option<&Triangulation>) -> String {
    let n = d.n();
    let mut s = String::from("graph drawing {\n  node [shape=circle, fixedsize=true, width=0.3];\n");
    for i in 0..n as Vertex {
        let (x, y) = unit_circle_point(i, n);
        let _ = writeln!(s, "  v{i} [label=\"{i}\", pos=\"{:.4},{:.4}!\"];", 2.0 * x, 2.0 * y);
    }
    for e in d.edges() {
        let _ = writeln!(s, "  v{} -- v{};", e.lo(), e.hi());
    }
    if let Some(t) = t {
        for l in t.inner_links() {
            let _ = writeln!(s, "  v{} -- v{} [style=dashed, color=red];", l.a(), l.b());
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::triangulate_o2p;

    #[test]
    fn cycle_svg() {
        let s = svg(&ConvexDrawing::cycle(6).unwrap(), None);
        assert_eq!(s.matches("class=\"vertex\"").count(), 6);
        assert_eq!(s.matches("class=\"edge\"").count(), 6);
        assert!(!s.contains("dasharray"));
    }

    #[test]
    fn k5_with_links() {
        let d = ConvexDrawing::complete(5);
        let (t, _) = triangulate_o2p(&d).unwrap();
        let s = svg(&d, Some(&t));
        assert_eq!(s.matches("class=\"edge\"").count(), 10);
        assert_eq!(s.matches("class=\"link\"").count(), 2);
        assert_eq!(s, svg(&d, Some(&t)));
    }

    #[test]
    fn first_vertex_on_the_x_axis() {
        assert_eq!(unit_circle_point(0, 7), (1.0, 0.0));
        let s = svg(&ConvexDrawing::cycle(4).unwrap(), None);
        assert!(s.contains("cx=\"380.0000\" cy=\"200.0000\""));
    }

    #[test]
    fn dot_lists_edges_and_links() {
        let d = ConvexDrawing::complete(4);
        let (t, _) = crate::triangulation::triangulate_strong(&d, 1).unwrap();
        let s = drawing_dot(&d, Some(&t));
        assert_eq!(s.matches(" -- ").count(), 7);
        assert_eq!(s.matches("dashed").count(), 1);
    }
}
