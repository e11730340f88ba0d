//! Intersections of translated convex bodies.

use super::body::{ConvexBody, Disk};
use super::point::{lowest_point_of, Point2};
use super::{GeometryError, EPS};

/// The intersection of several placed bodies of one kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Empty,
    /// Convex polygon, possibly degenerate (a segment or a single point
    /// when the bodies only touch). Vertices counter-clockwise.
    Polygon(Vec<Point2>),
    /// Intersection of disks, kept symbolically. `lowest` caches the
    /// lowest point, which also witnesses non-emptiness.
    Disks { disks: Vec<Disk>, lowest: Point2 },
}

impl Region {
    pub fn is_empty(&self) -> bool {
        matches!(self, Region::Empty)
    }

    /// Lexicographic `(y, x)` minimum of the region.
    pub fn lowest_point(&self) -> Option<Point2> {
        match self {
            Region::Empty => None,
            Region::Polygon(v) => lowest_point_of(v),
            Region::Disks { lowest, .. } => Some(*lowest),
        }
    }

    pub fn contains(&self, p: Point2, slack: f64) -> bool {
        match self {
            Region::Empty => false,
            Region::Polygon(v) => match v.len() {
                0 => false,
                1 => p.distance(v[0]) <= slack,
                2 => segment_distance(p, v[0], v[1]) <= slack,
                n => (0..n).all(|i| {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    (b - a).cross(p - a) >= -slack * (b - a).norm()
                }),
            },
            Region::Disks { disks, .. } => disks.iter().all(|d| p.distance(d.center) <= d.radius + slack),
        }
    }

    /// Vertices of a polygonal region, or boundary crossings of a disk
    /// region (its corner points).
    pub fn corners(&self) -> Vec<Point2> {
        match self {
            Region::Empty => Vec::new(),
            Region::Polygon(v) => v.clone(),
            Region::Disks { disks, .. } => {
                let tol = tolerance_for_disks(disks);
                let mut out = Vec::new();
                for i in 0..disks.len() {
                    for j in i + 1..disks.len() {
                        for p in circle_crossings(&disks[i], &disks[j]) {
                            if disks.iter().all(|d| p.distance(d.center) <= d.radius + tol) {
                                out.push(p);
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

fn tolerance_for_disks(disks: &[Disk]) -> f64 {
    let scale = disks.iter().map(|d| d.radius + d.center.norm()).fold(1.0, f64::max);
    EPS * scale
}

/// Crossing points of two circles: zero, one (tangency within tolerance)
/// or two points, the lower one (by `y`, then `x`) first.
pub fn circle_crossings(a: &Disk, b: &Disk) -> Vec<Point2> {
    let delta = b.center - a.center;
    let d = delta.norm();
    let scale = a.radius.max(b.radius).max(1.0);
    if d <= 1e-15 * scale {
        return Vec::new();
    }
    let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    let h2 = a.radius * a.radius - along * along;
    let u = delta / d;
    let base = a.center + u * along;
    let tol = EPS * scale;
    if h2 < -2.0 * tol * scale {
        return Vec::new();
    }
    if h2 <= tol * tol {
        return vec![base];
    }
    let h = h2.sqrt();
    let mut pts = vec![base + u.perp() * h, base - u.perp() * h];
    pts.sort_by(|p, q| p.cmp_yx(q));
    pts
}

/// Intersection point(s) of two closed segments. Overlapping collinear
/// segments yield the endpoints of the overlap.
pub fn segment_crossings(a0: Point2, a1: Point2, b0: Point2, b1: Point2) -> Vec<Point2> {
    let r = a1 - a0;
    let s = b1 - b0;
    let denom = r.cross(s);
    let qp = b0 - a0;
    let scale = r.norm().max(s.norm()).max(1e-300);
    let tol = EPS;
    if denom.abs() <= 1e-12 * scale * scale {
        // Parallel; collinear only if the offset is along r.
        if qp.cross(r).abs() > EPS * scale * r.norm().max(1e-300) {
            return Vec::new();
        }
        let rr = r.norm_sq();
        if rr == 0.0 {
            return Vec::new();
        }
        let t0 = qp.dot(r) / rr;
        let t1 = (b1 - a0).dot(r) / rr;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        if lo > hi + tol {
            return Vec::new();
        }
        let p = a0 + r * lo;
        let q = a0 + r * hi.max(lo);
        return if p.distance(q) <= EPS * scale { vec![p] } else { vec![p, q] };
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if t < -tol || t > 1.0 + tol || u < -tol || u > 1.0 + tol {
        return Vec::new();
    }
    vec![a0 + r * t.clamp(0.0, 1.0)]
}

/// Crossings of the boundaries of two placed bodies of the same kind.
pub fn boundary_crossings(a: &ConvexBody, b: &ConvexBody) -> Result<Vec<Point2>, GeometryError> {
    match (a, b) {
        (ConvexBody::Disk(da), ConvexBody::Disk(db)) => Ok(circle_crossings(da, db)),
        (ConvexBody::Polygon(pa), ConvexBody::Polygon(pb)) => {
            let mut out: Vec<Point2> = Vec::new();
            for (a0, a1) in pa.edges() {
                for (b0, b1) in pb.edges() {
                    for p in segment_crossings(a0, a1, b0, b1) {
                        if !out.iter().any(|q| q.distance(p) <= 1e-12) {
                            out.push(p);
                        }
                    }
                }
            }
            Ok(out)
        }
        _ => Err(GeometryError::MixedBodies),
    }
}

/// Clips a (possibly degenerate) convex point list to `<n, p> <= h + tol`.
fn clip(poly: &[Point2], n: Point2, h: f64, tol: f64) -> Vec<Point2> {
    let len = poly.len();
    if len == 0 {
        return Vec::new();
    }
    if len == 1 {
        return if n.dot(poly[0]) <= h + tol { poly.to_vec() } else { Vec::new() };
    }
    let mut out = Vec::with_capacity(len + 2);
    for i in 0..len {
        let cur = poly[i];
        let next = poly[(i + 1) % len];
        let dc = n.dot(cur) - h;
        let dn = n.dot(next) - h;
        let cur_in = dc <= tol;
        let next_in = dn <= tol;
        if cur_in {
            out.push(cur);
        }
        if cur_in != next_in && (dc - dn).abs() > 0.0 {
            // Cross the exact line, not the tolerance band.
            let t = (dc / (dc - dn)).clamp(0.0, 1.0);
            out.push(cur.lerp(next, t));
        }
    }
    dedup_ring(out)
}

fn dedup_ring(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.dedup_by(|a, b| a.distance(*b) <= 1e-13);
    while pts.len() > 1 && pts[0].distance(pts[pts.len() - 1]) <= 1e-13 {
        pts.pop();
    }
    pts
}

fn intersect_polygons(polys: &[&super::body::Polygon]) -> Region {
    let scale = polys
        .iter()
        .flat_map(|p| p.vertices().iter())
        .map(|v| v.norm())
        .fold(1.0, f64::max);
    let tol = EPS * scale;
    let mut current: Vec<Point2> = polys[0].vertices().to_vec();
    for p in &polys[1..] {
        if p.is_point() {
            let v = p.vertices()[0];
            let inside = match current.len() {
                0 => false,
                _ => Region::Polygon(current.clone()).contains(v, tol),
            };
            current = if inside { vec![v] } else { Vec::new() };
        } else {
            for (n, h) in p.halfplanes() {
                current = clip(&current, n, h, tol);
                if current.is_empty() {
                    return Region::Empty;
                }
            }
        }
        if current.is_empty() {
            return Region::Empty;
        }
    }
    Region::Polygon(current)
}

fn intersect_disks(disks: Vec<Disk>) -> Region {
    let tol = tolerance_for_disks(&disks);
    let inside_all = |p: Point2| disks.iter().all(|d| p.distance(d.center) <= d.radius + tol);
    let mut best: Option<Point2> = None;
    let mut consider = |p: Point2| {
        if inside_all(p) && best.map_or(true, |b| p.cmp_yx(&b).is_lt()) {
            best = Some(p);
        }
    };
    for d in &disks {
        consider(d.center - Point2::new(0.0, d.radius));
    }
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            for p in circle_crossings(&disks[i], &disks[j]) {
                consider(p);
            }
        }
    }
    match best {
        Some(lowest) => Region::Disks { disks, lowest },
        None => Region::Empty,
    }
}

/// Exact intersection of placed bodies (all polygons or all disks).
/// Touching bodies yield a degenerate but non-empty region.
pub fn intersect_all(bodies: &[ConvexBody]) -> Result<Region, GeometryError> {
    if bodies.is_empty() {
        return Err(GeometryError::Degenerate);
    }
    if bodies.iter().all(|b| b.is_disk()) {
        let disks = bodies
            .iter()
            .map(|b| match b {
                ConvexBody::Disk(d) => *d,
                ConvexBody::Polygon(_) => unreachable!(),
            })
            .collect();
        return Ok(intersect_disks(disks));
    }
    let polys: Option<Vec<&super::body::Polygon>> = bodies.iter().map(|b| b.as_polygon()).collect();
    polys.map(|p| intersect_polygons(&p)).ok_or(GeometryError::MixedBodies)
}

/// Intersection of two placed bodies.
pub fn intersect(a: &ConvexBody, b: &ConvexBody) -> Result<Region, GeometryError> {
    intersect_all(&[a.clone(), b.clone()])
}
