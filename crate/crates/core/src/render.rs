//! Deterministic SVG figures of an instance, a certificate and the
//! construction behind it.

use std::fmt::Write;

use crate::disk::{center_sets, disk_pierce, lens_cover, strip_frame, DiskCase, Frame};
use crate::four_color::four_color_pierce;
use crate::geometry::{convex_hull, intersect_all, ConvexBody, Disk, Point2, CERT_SLACK};
use crate::instance::{verify_piercing, ColoredInstance, PiercingCertificate};
use crate::symmetric::{centered_gauge, jung_cover_three, symmetric_construction};
use crate::triangle::{affine_normalize, hexagon_frame, triangle_three_cover};

const PANEL: f64 = 480.0;
const MARGIN: f64 = 24.0;
const TITLE: f64 = 28.0;
const POINT_RADIUS: f64 = 3.5;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const REGION_SAMPLES: usize = 720;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("certificate does not match the instance: {0}")]
    Mismatch(String),
    #[error("construction could not be rebuilt: {0}")]
    Construction(String),
}

#[derive(Clone, Debug)]
enum Shape {
    Polygon(Vec<Point2>),
    Circle(Disk),
    Segment(Point2, Point2),
    Point(Point2, String),
}

#[derive(Clone, Debug)]
struct Item {
    shape: Shape,
    class: String,
    stroke: &'static str,
    fill: &'static str,
}

/// One square panel in world coordinates.
#[derive(Clone, Debug, Default)]
pub struct Panel {
    title: String,
    items: Vec<Item>,
}

impl Panel {
    fn new(title: &str) -> Self {
        Self { title: title.to_string(), items: Vec::new() }
    }

    fn push(&mut self, shape: Shape, class: &str, stroke: &'static str, fill: &'static str) {
        self.items.push(Item { shape, class: class.to_string(), stroke, fill });
    }

    fn body(&mut self, body: &ConvexBody, class: &str, stroke: &'static str, fill: &'static str) {
        match body {
            ConvexBody::Disk(d) => self.push(Shape::Circle(*d), class, stroke, fill),
            ConvexBody::Polygon(p) => self.push(Shape::Polygon(p.vertices().to_vec()), class, stroke, fill),
        }
    }

    fn point(&mut self, p: Point2, label: &str, class: &str, color: &'static str) {
        self.push(Shape::Point(p, label.to_string()), class, color, color);
    }

    /// Intersection of bodies, drawn from boundary samples inside all of them.
    fn region(&mut self, bodies: &[ConvexBody], class: &str, stroke: &'static str, fill: &'static str) {
        if !matches!(intersect_all(bodies), Ok(r) if !r.is_empty()) {
            return;
        }
        let inside: Vec<Point2> = bodies
            .iter()
            .flat_map(|b| b.boundary_samples(REGION_SAMPLES))
            .filter(|&p| bodies.iter().all(|b| b.contains(p, 1e-9)))
            .collect();
        let hull = convex_hull(&inside);
        if hull.len() >= 3 {
            self.push(Shape::Polygon(hull), class, stroke, fill);
        }
    }

    fn bounds(&self) -> Option<(Point2, Point2)> {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: Point2, r: f64| {
            lo = Point2::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Point2::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        for item in &self.items {
            match &item.shape {
                Shape::Polygon(v) => v.iter().for_each(|&p| grow(p, 0.0)),
                Shape::Circle(d) => grow(d.center, d.radius),
                Shape::Segment(a, b) => {
                    grow(*a, 0.0);
                    grow(*b, 0.0);
                }
                Shape::Point(p, _) => grow(*p, 0.0),
            }
        }
        lo.is_finite().then_some((lo, hi))
    }
}

/// Fixed three-decimal output with negative zero folded to zero.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn write_panel(out: &mut String, panel: &Panel, index: usize) {
    let x0 = index as f64 * PANEL;
    let _ = writeln!(out, "<g class=\"panel\" transform=\"translate({} 0)\">", num(x0));
    let _ = writeln!(out, "<text class=\"title\" x=\"{}\" y=\"18\" font-size=\"14\">{}</text>", num(MARGIN), escape(&panel.title));
    let Some((lo, hi)) = panel.bounds() else {
        out.push_str("</g>\n");
        return;
    };
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let inner = PANEL - 2.0 * MARGIN;
    let s = (inner - TITLE) / span;
    let ox = MARGIN + 0.5 * (inner - s * (hi.x - lo.x));
    let oy = TITLE + MARGIN + 0.5 * (inner - TITLE - s * (hi.y - lo.y));
    let map = |p: Point2| (ox + (p.x - lo.x) * s, oy + (hi.y - p.y) * s);
    for item in &panel.items {
        let style = format!("class=\"{}\" stroke=\"{}\" fill=\"{}\"", item.class, item.stroke, item.fill);
        match &item.shape {
            Shape::Polygon(v) => {
                let pts: Vec<String> = v
                    .iter()
                    .map(|&p| {
                        let (x, y) = map(p);
                        format!("{},{}", num(x), num(y))
                    })
                    .collect();
                let _ = writeln!(out, "<polygon {style} fill-opacity=\"0.15\" points=\"{}\"/>", pts.join(" "));
            }
            Shape::Circle(d) => {
                let (x, y) = map(d.center);
                let _ = writeln!(
                    out,
                    "<circle {style} fill-opacity=\"0.15\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                    num(x),
                    num(y),
                    num(d.radius * s)
                );
            }
            Shape::Segment(a, b) => {
                let ((x1, y1), (x2, y2)) = (map(*a), map(*b));
                let _ = writeln!(out, "<line {style} x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>", num(x1), num(y1), num(x2), num(y2));
            }
            Shape::Point(p, label) => {
                let (x, y) = map(*p);
                let _ = writeln!(out, "<circle {style} cx=\"{}\" cy=\"{}\" r=\"{}\"/>", num(x), num(y), num(POINT_RADIUS));
                if !label.is_empty() {
                    let _ = writeln!(
                        out,
                        "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>",
                        num(x + 5.0),
                        num(y - 5.0),
                        escape(label)
                    );
                }
            }
        }
    }
    out.push_str("</g>\n");
}

/// Serializes panels side by side.
pub fn panels_to_svg(panels: &[Panel]) -> String {
    let width = PANEL * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" stroke-width=\"1\">",
        w = num(width),
        h = num(PANEL)
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, panel) in panels.iter().enumerate() {
        write_panel(&mut out, panel, i);
    }
    out.push_str("</svg>\n");
    out
}

fn piercing_panel(inst: &ColoredInstance, cert: &PiercingCertificate) -> Panel {
    let mut panel = Panel::new(&format!("{} certificate, family {}", cert.method, cert.family_index));
    for f in 0..inst.num_families() {
        let color = PALETTE[f % PALETTE.len()];
        for body in inst.placed_family(f) {
            panel.body(&body, &format!("body family-{f}"), color, if f == cert.family_index { color } else { "none" });
        }
    }
    for (i, &p) in cert.points.iter().enumerate() {
        panel.point(p, &format!("c{}", i + 1), "pierce", "black");
    }
    panel
}

fn symmetric_panel(inst: &ColoredInstance) -> Result<Panel, RenderError> {
    let c = symmetric_construction(inst).map_err(|e| RenderError::Construction(e.to_string()))?;
    let (gauge, offset) = centered_gauge(&inst.generator).map_err(|e| RenderError::Construction(e.to_string()))?;
    let mut panel = Panel::new("centers, S1, S2, p+K, R1, R2");
    let (s1, s2) = (gauge.ball(c.x1, 2.0), gauge.ball(c.x2, 2.0));
    panel.body(&s1, "region S1", "#7f7f7f", "none");
    panel.body(&s2, "region S2", "#7f7f7f", "none");
    panel.region(&[s1, s2], "region S1S2", "#bcbd22", "#bcbd22");
    panel.body(&gauge.ball(c.p, 1.0), "region pK", "black", "none");
    panel.body(&gauge.ball(c.r1, 1.0), "region R1", "#17becf", "#17becf");
    panel.body(&gauge.ball(c.r2, 1.0), "region R2", "#17becf", "#17becf");
    let color = PALETTE[c.m % PALETTE.len()];
    for &t in &inst.families[c.m].translates {
        panel.point(t + offset, "", "center", color);
    }
    for (p, label) in [(c.x1, "x1"), (c.x2, "x2"), (c.p, "p"), (c.q, "q"), (c.r1, "r1"), (c.r2, "r2")] {
        panel.point(p, label, "construction", "black");
    }
    Ok(panel)
}

fn jung_panel(inst: &ColoredInstance, cert: &PiercingCertificate) -> Result<Panel, RenderError> {
    let (gauge, offset) = centered_gauge(&inst.generator).map_err(|e| RenderError::Construction(e.to_string()))?;
    let centers: Vec<Point2> = inst.families[cert.family_index].translates.iter().map(|&t| t + offset).collect();
    let (center, radius) = gauge.enclosing_ball(&centers);
    let mut panel = Panel::new(&format!("enclosing ball, radius {}", num(radius)));
    panel.body(&gauge.ball(center, radius), "region jung-ball", "#7f7f7f", "none");
    if let Ok(cover) = jung_cover_three(&gauge, radius) {
        for (i, &c) in cover.iter().enumerate() {
            panel.body(&gauge.ball(center + c, 1.0), &format!("cover cover-{i}"), "#17becf", "#17becf");
        }
    }
    let color = PALETTE[cert.family_index % PALETTE.len()];
    for &p in &centers {
        panel.point(p, "", "center", color);
    }
    panel.point(center, "o", "construction", "black");
    Ok(panel)
}

fn triangle_panel(inst: &ColoredInstance, cert: &PiercingCertificate) -> Result<Panel, RenderError> {
    let err = |e: crate::triangle::TriangleError| RenderError::Construction(e.to_string());
    let (map, _) = affine_normalize(&inst.generator).map_err(err)?;
    let points: Vec<Point2> = inst.families[cert.family_index].translates.iter().map(|&t| -map.linear(t)).collect();
    let frame = hexagon_frame(&points);
    let cover = triangle_three_cover(&points).map_err(err)?;
    let mut panel = Panel::new("normalized frame: hexagon ABCDEF, Q1-Q3, covers");
    for (t, label) in [(frame.t1, "T1"), (frame.t2, "T2")] {
        panel.push(Shape::Polygon(t.to_vec()), &format!("region {label}"), "#7f7f7f", "none");
    }
    panel.push(Shape::Polygon(frame.vertices.to_vec()), "region hexagon", "black", "#bcbd22");
    for (i, body) in cover.unit_triangles().iter().enumerate() {
        panel.body(body, &format!("cover cover-{i}"), "#17becf", "none");
    }
    for (i, q) in cover.q_triangles.iter().enumerate() {
        panel.push(Shape::Polygon(q.to_vec()), &format!("region Q{}", i + 1), "#d62728", "#d62728");
    }
    for (p, label) in frame.vertices.iter().zip(["A", "B", "C", "D", "E", "F"]) {
        panel.point(*p, label, "construction", "black");
    }
    let color = PALETTE[cert.family_index % PALETTE.len()];
    for &p in &points {
        panel.point(p, "", "center", color);
    }
    Ok(panel)
}

fn disk_panel(inst: &ColoredInstance) -> Result<Panel, RenderError> {
    let err = |e: crate::disk::DiskError| RenderError::Construction(e.to_string());
    let (sets, _) = center_sets(inst).map_err(err)?;
    let outcome = disk_pierce(&sets).map_err(err)?;
    let (x1, y1) = outcome.axis;
    let frame = Frame::new(x1, y1);
    let m = outcome.certificate.excluded_index;
    let case = match outcome.case {
        DiskCase::Lens => "lens",
        DiskCase::Strip(_) => "strip",
        DiskCase::SmallDiameter => "small diameter",
    };
    let mut panel = Panel::new(&format!("unit-diameter frame, {case} case, d = {}", num(outcome.diameter)));
    if outcome.case != DiskCase::SmallDiameter {
        for end in [x1, y1] {
            panel.push(Shape::Circle(Disk { center: end, radius: 1.0 }), "region lens", "#7f7f7f", "none");
        }
    }
    match outcome.case {
        DiskCase::Lens => {
            let lc = lens_cover();
            let world = |p: Point2| frame.point_to_world(p);
            for (p, label) in [(lc.lens.a, "a"), (lc.lens.b, "b"), (lc.c, "c"), (lc.e, "e")] {
                panel.point(world(p), label, "construction", "black");
            }
            panel.push(Shape::Segment(world(lc.lens.b), world(lc.c)), "construction ray", "black", "none");
            panel.push(Shape::Segment(world(lc.lens.b), world(lc.e)), "construction ray", "black", "none");
        }
        DiskCase::Strip(_) => {
            let sf = strip_frame();
            let world = |p: Point2| frame.point_to_world(p);
            panel.push(Shape::Segment(world(sf.z), world(sf.w)), "construction chord", "black", "none");
            panel.push(Shape::Segment(world(sf.x), world(sf.y)), "construction chord", "black", "none");
            for (p, label) in [(sf.o1, "o1"), (sf.q, "q"), (sf.s, "s"), (sf.q_prime, "q'"), (sf.s_prime, "s'")] {
                panel.point(world(p), label, "construction", "black");
            }
        }
        DiskCase::SmallDiameter => {}
    }
    for (i, body) in outcome.certificate.covers.iter().enumerate() {
        panel.body(body, &format!("cover cover-{i}"), "#17becf", "#17becf");
    }
    for (j, set) in sets.sets.iter().enumerate() {
        let color = PALETTE[j % PALETTE.len()];
        for &p in set {
            panel.point(p, "", if j == m { "center excluded" } else { "center" }, color);
        }
    }
    panel.point(x1, "x1", "construction", "black");
    panel.point(y1, "y1", "construction", "black");
    Ok(panel)
}

fn four_color_panel(inst: &ColoredInstance, cert: &PiercingCertificate) -> Result<Option<Panel>, RenderError> {
    let out = four_color_pierce(inst).map_err(|e| RenderError::Construction(e.to_string()))?;
    let Some(triple) = out.triple.filter(|_| out.certificate.family_index == cert.family_index) else {
        return Ok(None);
    };
    let mut panel = Panel::new(&format!("hole triangle, area {}", num(triple.triangle.area)));
    for t in 0..3 {
        let f = triple.colors[t];
        panel.body(&inst.placed(f, triple.indices[t]), &format!("body family-{f}"), PALETTE[f % PALETTE.len()], "none");
    }
    panel.push(Shape::Polygon(triple.triangle.vertices.to_vec()), "region hole", "black", "#bcbd22");
    for (i, &v) in triple.triangle.vertices.iter().enumerate() {
        panel.point(v, &format!("x{}", i + 1), "construction", "black");
    }
    Ok(Some(panel))
}

/// The panels for a verified certificate: the bodies with the piercing
/// points, then the construction that produced them.
pub fn render_panels(inst: &ColoredInstance, cert: &PiercingCertificate) -> Result<Vec<Panel>, RenderError> {
    verify_piercing(inst, cert, CERT_SLACK).map_err(|f| RenderError::Mismatch(f.to_string()))?;
    let mut panels = vec![piercing_panel(inst, cert)];
    let extra = match cert.method.as_str() {
        "symmetric" => Some(symmetric_panel(inst)?),
        "jung" => Some(jung_panel(inst, cert)?),
        "triangle" => Some(triangle_panel(inst, cert)?),
        "disk" => Some(disk_panel(inst)?),
        "four-color" => four_color_panel(inst, cert)?,
        _ => None,
    };
    panels.extend(extra);
    Ok(panels)
}

pub fn render_svg(inst: &ColoredInstance, cert: &PiercingCertificate) -> Result<String, RenderError> {
    Ok(panels_to_svg(&render_panels(inst, cert)?))
}
