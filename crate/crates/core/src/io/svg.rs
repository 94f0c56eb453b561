//! Deterministic SVG 1.1 figures. The y axis points up, as in the plane.

use crate::geom::{BodyKind, Family, Rational, Rational2};
use crate::hypergraph::Witness;
use num_traits::ToPrimitive;
use std::fmt::Write;

/// Longest side of the drawing, in SVG user units.
const CANVAS: f64 = 512.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Viewport {
    /// The bounding box of the family, grown until every witness line
    /// crosses it, padded by a tenth of its size.
    Auto,
    Explicit { min: Rational2, max: Rational2 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub family: Family,
    pub witnesses: Vec<Witness>,
    pub viewport: Viewport,
    pub stroke_width: Rational,
}

impl RenderSpec {
    pub fn new(family: Family) -> Self {
        RenderSpec {
            family,
            witnesses: Vec::new(),
            viewport: Viewport::Auto,
            stroke_width: Rational::new(1.into(), 50.into()),
        }
    }
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Fixed precision with trailing zeros removed, so output is reproducible.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Canvas {
    min: (f64, f64),
    max: (f64, f64),
    scale: f64,
}

impl Canvas {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.min.0) * self.scale, (self.max.1 - y) * self.scale)
    }

    fn point(&self, x: f64, y: f64) -> String {
        let (sx, sy) = self.map(x, y);
        format!("{},{}", num(sx), num(sy))
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [
            (self.min.0, self.min.1),
            (self.max.0, self.min.1),
            (self.max.0, self.max.1),
            (self.min.0, self.max.1),
        ]
    }
}

fn viewport(spec: &RenderSpec) -> ((f64, f64), (f64, f64)) {
    match &spec.viewport {
        Viewport::Explicit { min, max } => ((f(&min.x), f(&min.y)), (f(&max.x), f(&max.y))),
        Viewport::Auto => match spec.family.bounding_box() {
            None => ((-1.0, -1.0), (1.0, 1.0)),
            Some((lo, hi)) => {
                let (mut lx, mut ly, mut hx, mut hy) = (f(&lo.x), f(&lo.y), f(&hi.x), f(&hi.y));
                let (cx, cy) = ((lx + hx) / 2.0, (ly + hy) / 2.0);
                for w in &spec.witnesses {
                    // Foot of the perpendicular from the center to the line.
                    let (a, b, c) = (f(w.halfplane.a()), f(w.halfplane.b()), f(w.halfplane.c()));
                    let t = (c - a * cx - b * cy) / (a * a + b * b);
                    let (px, py) = (cx + t * a, cy + t * b);
                    (lx, ly, hx, hy) = (lx.min(px), ly.min(py), hx.max(px), hy.max(py));
                }
                let pad = ((hx - lx).max(hy - ly) / 10.0).max(1e-3);
                ((lx - pad, ly - pad), (hx + pad, hy + pad))
            }
        },
    }
}

/// The part of the polygon where `a x + b y <= c`.
fn clip(poly: &[(f64, f64)], a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let side = |p: &(f64, f64)| a * p.0 + b * p.1 - c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (sp, sq) = (side(&p), side(&q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Endpoints of the line `a x + b y = c` inside the viewport, if it crosses.
fn boundary(canvas: &Canvas, a: f64, b: f64, c: f64) -> Option<((f64, f64), (f64, f64))> {
    let corners = canvas.corners();
    let mut hits: Vec<(f64, f64)> = Vec::new();
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        let (sp, sq) = (a * p.0 + b * p.1 - c, a * q.0 + b * q.1 - c);
        if sp == 0.0 {
            hits.push(p);
        } else if (sp < 0.0) != (sq < 0.0) && sq != 0.0 {
            let t = sp / (sp - sq);
            hits.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    match hits.len() {
        0 | 1 => None,
        _ => Some((hits[0], hits[hits.len() - 1])),
    }
}

/// Bodies as filled polygons, strokes or dots with id labels; each witness
/// as its boundary line over a shaded halfplane. Identical input gives
/// byte-identical output.
pub fn render_svg(spec: &RenderSpec) -> String {
    let (min, max) = viewport(spec);
    let (w, h) = ((max.0 - min.0).max(1e-9), (max.1 - min.1).max(1e-9));
    let scale = CANVAS / w.max(h);
    let canvas = Canvas { min, max, scale };
    let stroke = num(f(&spec.stroke_width) * scale);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"#,
        num(w * scale),
        num(h * scale)
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, num(w * scale), num(h * scale));
    for (i, wit) in spec.witnesses.iter().enumerate() {
        let (a, b, c) = (f(wit.halfplane.a()), f(wit.halfplane.b()), f(wit.halfplane.c()));
        let shade = clip(&canvas.corners(), a, b, c);
        if shade.len() >= 3 {
            let pts: Vec<String> = shade.iter().map(|p| canvas.point(p.0, p.1)).collect();
            let _ = writeln!(
                out,
                r#"<polygon class="halfplane" data-witness="{i}" points="{}" fill="steelblue" fill-opacity="0.08" stroke="none"/>"#,
                pts.join(" ")
            );
        }
        if let Some((p, q)) = boundary(&canvas, a, b, c) {
            let (p, q) = (canvas.map(p.0, p.1), canvas.map(q.0, q.1));
            let _ = writeln!(
                out,
                r#"<line class="witness" data-witness="{i}" data-subset="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="steelblue" stroke-width="{stroke}" stroke-dasharray="4 3"/>"#,
                wit.subset.to_binary(),
                num(p.0),
                num(p.1),
                num(q.0),
                num(q.1)
            );
        }
    }
    for body in spec.family.bodies() {
        let v: Vec<(f64, f64)> = body.vertices().iter().map(|p| (f(&p.x), f(&p.y))).collect();
        let id = body.id();
        match body.kind() {
            BodyKind::Point => {
                let (x, y) = canvas.map(v[0].0, v[0].1);
                let _ = writeln!(
                    out,
                    r#"<circle class="body" data-id="{id}" cx="{}" cy="{}" r="{}" fill="black"/>"#,
                    num(x),
                    num(y),
                    num(3.0 * f(&spec.stroke_width) * scale)
                );
            }
            BodyKind::Segment => {
                let (p, q) = (canvas.map(v[0].0, v[0].1), canvas.map(v[1].0, v[1].1));
                let _ = writeln!(
                    out,
                    r#"<line class="body" data-id="{id}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{stroke}"/>"#,
                    num(p.0),
                    num(p.1),
                    num(q.0),
                    num(q.1)
                );
            }
            BodyKind::Polygon => {
                let pts: Vec<String> = v.iter().map(|p| canvas.point(p.0, p.1)).collect();
                let _ = writeln!(
                    out,
                    r#"<polygon class="body" data-id="{id}" points="{}" fill="lightgray" stroke="black" stroke-width="{stroke}"/>"#,
                    pts.join(" ")
                );
            }
        }
        let n = v.len() as f64;
        let (cx, cy) = (v.iter().map(|p| p.0).sum::<f64>() / n, v.iter().map(|p| p.1).sum::<f64>() / n);
        let (lx, ly) = canvas.map(cx, cy);
        let _ = writeln!(
            out,
            r#"<text class="label" x="{}" y="{}" font-family="sans-serif" font-size="12" fill="firebrick">{id}</text>"#,
            num(lx + 4.0),
            num(ly - 4.0)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_four_one_intersection, gen_three_disjoint};
    use crate::hypergraph::{enumerate_realized, realize_witness};

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn three_disjoint_with_witnesses() {
        let r = gen_three_disjoint();
        let edges = enumerate_realized(&r.family).unwrap();
        let witnesses: Vec<Witness> = edges
            .edges()
            .iter()
            .map(|e| realize_witness(&r.family, e).unwrap().unwrap())
            .collect();
        let mut spec = RenderSpec::new(r.family.clone());
        spec.witnesses = witnesses;
        let svg = render_svg(&spec);
        assert_eq!(count(&svg, r#"<polygon class="body""#), 3);
        assert_eq!(count(&svg, r#"<line class="witness""#), 8);
        assert_eq!(svg, render_svg(&spec));
    }

    #[test]
    fn empty_family_is_a_blank_canvas() {
        let svg = render_svg(&RenderSpec::new(Family::planar(vec![]).unwrap()));
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(count(&svg, "class=\"body\""), 0);
    }

    #[test]
    fn four_segments_as_strokes() {
        let svg = render_svg(&RenderSpec::new(gen_four_one_intersection().family));
        assert_eq!(count(&svg, r#"<line class="body""#), 4);
        assert_eq!(count(&svg, r#"class="label""#), 4);
    }

    #[test]
    fn y_axis_points_up() {
        let f = Family::planar(vec![vec![Rational2::from_ints(0, 0)], vec![Rational2::from_ints(0, 10)]]).unwrap();
        let svg = render_svg(&RenderSpec::new(f));
        let cy: Vec<f64> = svg
            .lines()
            .filter(|l| l.starts_with("<circle"))
            .map(|l| l.split("cy=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap())
            .collect();
        assert!(cy[0] > cy[1]);
    }

    #[test]
    fn clipping() {
        let square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        assert_eq!(clip(&square, 1.0, 0.0, 0.5).len(), 4);
        assert_eq!(clip(&square, 1.0, 0.0, 5.0).len(), 4);
        assert!(clip(&square, 1.0, 0.0, -5.0).is_empty());
    }
}
