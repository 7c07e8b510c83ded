//! SVG 1.1 figures of a result file. Geometry is written in world
//! coordinates inside a y-flipped group, so emitted numbers can be read back
//! exactly.

use std::fmt::Write;

use dubnet_core::limacon::{Limacon, LimaconFrame};
use dubnet_core::{angles_from_weights, Point2, Weights};

use crate::result::{CandidateRecord, ConstructionRecord, EdgeRecord, ResultFile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub show_construction: bool,
    pub locus: bool,
    pub locus_samples: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { show_construction: false, locus: false, locus_samples: 360 }
    }
}

fn num(v: f64) -> String {
    // Avoid "-0" so that equal geometry prints identically.
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn pt(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

struct Bounds {
    min: Point2,
    max: Point2,
}

impl Bounds {
    fn new() -> Self {
        Self { min: Point2::new(f64::INFINITY, f64::INFINITY), max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY) }
    }

    fn add(&mut self, p: Point2, pad: f64) {
        self.min = Point2::new(self.min.x.min(p.x - pad), self.min.y.min(p.y - pad));
        self.max = Point2::new(self.max.x.max(p.x + pad), self.max.y.max(p.y + pad));
    }
}

/// Vertices of the junction locus for the winner's first two circles, in
/// world coordinates.
pub fn locus_vertices(result: &ResultFile, samples: usize) -> Option<Vec<Point2>> {
    let winner = result.winner()?;
    let (net, cons) = (winner.network.as_ref()?, winner.construction.as_ref()?);
    let alpha = angles_from_weights(&Weights(result.weights?)).ok()?.0[2];
    let rho = result.rho;
    let c1 = pt(net.edges[0].circle_centre) / rho;
    let c2 = pt(net.edges[1].circle_centre) / rho;
    let parity = cons.parity;
    let frame = LimaconFrame::new(c1, c2, pt(cons.melzak_point) / rho, parity).ok()?;
    let curve = Limacon::new(alpha, c1.distance(c2), parity).ok()?;
    Some(curve.samples(samples).into_iter().map(|(theta, r)| frame.from_polar(r, theta) * rho).collect())
}

fn arc_path(e: &EdgeRecord) -> String {
    let start = pt(e.start);
    let end = pt(e.tangent_point);
    let r = num(e.circle_radius);
    let sweep = e.arc_sweep_degrees.to_radians();
    let flag = if sweep > 0.0 { 1 } else { 0 };
    let mut d = format!("M {} {}", num(start.x), num(start.y));
    if sweep.abs() > std::f64::consts::PI {
        // Split so that neither piece needs the large-arc flag.
        let mid = pt(e.circle_centre) + Point2::unit(e.arc_start_degrees.to_radians() + 0.5 * sweep) * e.circle_radius;
        let _ = write!(d, " A {r} {r} 0 0 {flag} {} {}", num(mid.x), num(mid.y));
    }
    if sweep != 0.0 {
        let _ = write!(d, " A {r} {r} 0 0 {flag} {} {}", num(end.x), num(end.y));
    }
    d
}

fn construction_layer(out: &mut String, c: &ConstructionRecord, dot: f64, result: &ResultFile) {
    let m = pt(c.melzak_point);
    let _ = writeln!(out, r##"  <g id="construction" fill="none" stroke="#7a5195" stroke-dasharray="{0} {0}">"##, num(dot));
    let _ = writeln!(
        out,
        r#"    <circle class="melzak-circle" cx="{}" cy="{}" r="{}"/>"#,
        num(m.x),
        num(m.y),
        num(c.melzak_radius)
    );
    let a = pt(c.auxiliary_centre);
    let _ = writeln!(
        out,
        r#"    <circle class="auxiliary-circle" cx="{}" cy="{}" r="{}"/>"#,
        num(a.x),
        num(a.y),
        num(c.auxiliary_radius)
    );
    let mp = pt(c.simpson_point);
    let t3 = pt(c.simpson_tangent_point);
    let dir = pt(c.simpson_direction);
    let reach = 2.0 * result.rho;
    let (from, to) = (mp - dir * reach, t3 + dir * reach);
    let _ = writeln!(
        out,
        r#"    <line class="simpson-line" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(from.x),
        num(from.y),
        num(to.x),
        num(to.y)
    );
    for (class, p) in [("melzak-point", m), ("simpson-point", mp), ("s-point", pt(c.s))] {
        let _ = writeln!(
            out,
            r##"    <circle class="{class}" cx="{}" cy="{}" r="{}" fill="#7a5195" stroke="none"/>"##,
            num(p.x),
            num(p.y),
            num(1.5 * dot)
        );
    }
    let _ = writeln!(out, "  </g>");
}

fn network_layers(out: &mut String, w: &CandidateRecord, line: f64) {
    let Some(net) = &w.network else { return };
    let _ = writeln!(out, r##"  <g id="dubins-circles" fill="none" stroke="#bbbbbb" stroke-width="{}">"##, num(0.5 * line));
    for e in &net.edges {
        let c = pt(e.circle_centre);
        let _ = writeln!(
            out,
            r#"    <circle class="dubins-circle" cx="{}" cy="{}" r="{}"/>"#,
            num(c.x),
            num(c.y),
            num(e.circle_radius)
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, r##"  <g id="arcs" fill="none" stroke="#003f5c" stroke-width="{}">"##, num(line));
    for e in &net.edges {
        let _ = writeln!(out, r#"    <path class="arc" d="{}"/>"#, arc_path(e));
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, r##"  <g id="segments" stroke="#003f5c" stroke-width="{}">"##, num(line));
    let j = pt(net.junction);
    for e in &net.edges {
        let t = pt(e.tangent_point);
        let _ = writeln!(
            out,
            r#"    <line class="segment" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(t.x),
            num(t.y),
            num(j.x),
            num(j.y)
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(
        out,
        r##"  <circle id="junction" class="junction" cx="{}" cy="{}" r="{}" fill="#ffa600"/>"##,
        num(j.x),
        num(j.y),
        num(3.0 * line)
    );
}

/// Draws terminals with heading arrows and the winning network, plus the
/// optional construction and locus layers.
pub fn render_svg(result: &ResultFile, opts: &RenderOptions) -> String {
    let rho = result.rho;
    let winner = result.winner();
    let construction = winner.and_then(|w| w.construction.as_ref()).filter(|_| opts.show_construction);
    let locus = if opts.locus { locus_vertices(result, opts.locus_samples.max(3)) } else { None };

    let mut b = Bounds::new();
    for t in &result.terminals {
        b.add(Point2::new(t.x, t.y), 2.0 * rho);
    }
    if let Some(net) = winner.and_then(|w| w.network.as_ref()) {
        b.add(pt(net.junction), rho);
        for e in &net.edges {
            b.add(pt(e.circle_centre), e.circle_radius);
        }
    }
    if let Some(c) = construction {
        b.add(pt(c.melzak_point), c.melzak_radius);
        b.add(pt(c.auxiliary_centre), c.auxiliary_radius);
        b.add(pt(c.simpson_point), rho);
    }
    for p in locus.iter().flatten() {
        b.add(*p, 0.0);
    }
    let margin = rho;
    let (x0, y0) = (b.min.x - margin, b.min.y - margin);
    let (w, h) = (b.max.x - b.min.x + 2.0 * margin, b.max.y - b.min.y + 2.0 * margin);
    let line = 0.04 * rho;
    let px = 800.0;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(px),
        num((px * h / w).round()),
        num(x0),
        num(-(y0 + h)),
        num(w),
        num(h)
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)">"#);

    if let Some(w) = winner {
        network_layers(&mut out, w, line);
    }
    if let Some(c) = construction {
        construction_layer(&mut out, c, line, result);
    }
    if let Some(vertices) = &locus {
        let points: Vec<String> = vertices.iter().map(|p| format!("{},{}", num(p.x), num(p.y))).collect();
        let _ = writeln!(
            out,
            r##"  <polygon id="locus" class="limacon" fill="none" stroke="#ef5675" stroke-width="{}" points="{}"/>"##,
            num(0.5 * line),
            points.join(" ")
        );
    }

    let _ = writeln!(out, r##"  <g id="terminals" stroke="#2f4b7c" stroke-width="{}">"##, num(line));
    for t in &result.terminals {
        let p = Point2::new(t.x, t.y);
        let u = Point2::unit(t.theta_degrees.to_radians());
        let tip = p + u * (1.5 * rho);
        let side = u.perp() * (0.25 * rho);
        let base = p + u * (1.1 * rho);
        let (l, r) = (base + side, base - side);
        let _ = writeln!(
            out,
            r##"    <circle class="terminal" cx="{}" cy="{}" r="{}" fill="#2f4b7c"/>"##,
            num(p.x),
            num(p.y),
            num(3.0 * line)
        );
        let _ = writeln!(
            out,
            r#"    <line class="heading" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(p.x),
            num(p.y),
            num(base.x),
            num(base.y)
        );
        let _ = writeln!(
            out,
            r##"    <polygon class="arrowhead" fill="#2f4b7c" points="{},{} {},{} {},{}"/>"##,
            num(tip.x),
            num(tip.y),
            num(l.x),
            num(l.y),
            num(r.x),
            num(r.y)
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}
