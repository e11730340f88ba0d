//! Convex bodies: normalized polygons and exact disks.

use serde::{Deserialize, Serialize};

use super::point::{orient, Point2};
use super::{GeometryError, EPS, EPS_DEDUP};

/// Convex polygon with counter-clockwise vertices.
///
/// After construction there are no duplicate vertices and no three
/// consecutive collinear ones. The only area-zero polygon allowed is the
/// single-vertex one produced by [`Polygon::point`].
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

/// The generator body of a family of translates.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    Polygon(Polygon),
    Disk(Disk),
}

/// Convex hull with collinear points removed, counter-clockwise, starting
/// at the lowest-then-leftmost point.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.cmp_yx(b));
    pts.dedup_by(|a, b| a.distance(*b) < EPS_DEDUP);
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts.iter().map(|p| p.x.abs().max(p.y.abs())).fold(1.0, f64::max);
    let tol = EPS * EPS * scale * scale;
    let keeps = |a: Point2, b: Point2, p: Point2| orient(a, b, p) > tol;

    // Andrew's monotone chain on (y, x) order.
    let mut lower: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && !keeps(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !keeps(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    drop_flat_vertices(lower, EPS * scale)
}

/// Removes hull vertices within `tol` of the chord joining their
/// neighbours, which the sort-order pass can miss when nearly collinear
/// points are ordered by rounding noise.
fn drop_flat_vertices(mut hull: Vec<Point2>, tol: f64) -> Vec<Point2> {
    loop {
        let n = hull.len();
        if n <= 3 {
            return hull;
        }
        let flat = (0..n).find(|&i| {
            let (a, b, c) = (hull[(i + n - 1) % n], hull[i], hull[(i + 1) % n]);
            orient(a, b, c) <= tol * (c - a).norm()
        });
        match flat {
            Some(i) => {
                hull.remove(i);
            }
            None => break,
        }
    }
    // Restore the canonical start at the lowest-then-leftmost vertex.
    let start = (0..hull.len()).min_by(|&i, &j| hull[i].cmp_yx(&hull[j])).unwrap_or(0);
    hull.rotate_left(start);
    hull
}

fn polygon_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
        * 0.5
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

impl Polygon {
    /// Builds a normalized polygon. The input must already be in convex
    /// position (any order, duplicates and collinear points tolerated).
    pub fn new(points: Vec<Point2>) -> Result<Self, GeometryError> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let hull = convex_hull(&points);
        if hull.len() < 3 {
            return Err(GeometryError::Degenerate);
        }
        let scale = hull.iter().map(|p| p.norm()).fold(1.0, f64::max);
        if polygon_area(&hull) <= 1e-12 * scale * scale {
            return Err(GeometryError::Degenerate);
        }
        let n = hull.len();
        for &p in &points {
            let on_boundary = (0..n)
                .any(|i| segment_distance(p, hull[i], hull[(i + 1) % n]) <= EPS * scale);
            if !on_boundary {
                return Err(GeometryError::NotConvex);
            }
        }
        Ok(Self { vertices: hull })
    }

    /// Hull of an arbitrary point cloud; fails only when it has no area.
    pub fn hull_of(points: &[Point2]) -> Result<Self, GeometryError> {
        let hull = convex_hull(points);
        Self::new(hull)
    }

    /// Degenerate single-vertex polygon, the identity of the Minkowski sum.
    pub fn point(p: Point2) -> Self {
        Self { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    /// Directed edges `(start, end)` in counter-clockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Outward unit normal and offset `(n, h)` of every edge, so the polygon
    /// is `{p : <n, p> <= h}` for all edges.
    pub fn halfplanes(&self) -> Vec<(Point2, f64)> {
        if self.is_point() {
            return Vec::new();
        }
        self.edges()
            .map(|(a, b)| {
                let n = Point2::new((b - a).y, -(b - a).x).normalized().expect("nonzero edge");
                (n, n.dot(a))
            })
            .collect()
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        if n < 3 {
            let sum = self.vertices.iter().fold(Point2::ORIGIN, |acc, &p| acc + p);
            return sum / n as f64;
        }
        let origin = self.vertices[0];
        let mut acc = Point2::ORIGIN;
        let mut area2 = 0.0;
        for i in 1..n - 1 {
            let a = self.vertices[i] - origin;
            let b = self.vertices[i + 1] - origin;
            let w = a.cross(b);
            area2 += w;
            acc += (a + b) * w;
        }
        origin + acc / (3.0 * area2)
    }

    pub fn translate(&self, t: Point2) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|&v| v + t).collect() }
    }

    /// Scaling about the origin by `s > 0`.
    pub fn scale(&self, s: f64) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|&v| v * s).collect() }
    }

    pub fn reflect(&self) -> Polygon {
        let mut vertices: Vec<Point2> = self.vertices.iter().map(|&v| -v).collect();
        // Point reflection preserves orientation; only restart at the lowest vertex.
        let start = lowest_index(&vertices);
        vertices.rotate_left(start);
        Polygon { vertices }
    }
}

fn lowest_index(vertices: &[Point2]) -> usize {
    vertices
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp_yx(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Minkowski sum of two convex polygons by merging their edge sequences in
/// angular order.
pub fn minkowski_sum(a: &Polygon, b: &Polygon) -> Polygon {
    if a.is_point() {
        return b.translate(a.vertices[0]);
    }
    if b.is_point() {
        return a.translate(b.vertices[0]);
    }
    let (pa, pb) = (&a.vertices, &b.vertices);
    let (ia, ib) = (lowest_index(pa), lowest_index(pb));
    let (n, m) = (pa.len(), pb.len());
    let mut out = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let va = pa[(ia + i) % n];
        let vb = pb[(ib + j) % m];
        out.push(va + vb);
        let ea = pa[(ia + i + 1) % n] - va;
        let eb = pb[(ib + j + 1) % m] - vb;
        if i >= n {
            j += 1;
        } else if j >= m {
            i += 1;
        } else {
            let c = ea.cross(eb);
            if c > 0.0 {
                i += 1;
            } else if c < 0.0 {
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
    }
    Polygon::hull_of(&out).expect("sum of two proper polygons has area")
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Result<Self, GeometryError> {
        if !center.is_finite() || !radius.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if radius <= 0.0 {
            return Err(GeometryError::NonPositiveRadius(radius));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: Point2, slack: f64) -> bool {
        p.distance(self.center) <= self.radius * (1.0 + slack)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

impl ConvexBody {
    pub fn polygon(points: Vec<Point2>) -> Result<Self, GeometryError> {
        Polygon::new(points).map(ConvexBody::Polygon)
    }

    pub fn disk(center: Point2, radius: f64) -> Result<Self, GeometryError> {
        Disk::new(center, radius).map(ConvexBody::Disk)
    }

    pub fn is_disk(&self) -> bool {
        matches!(self, ConvexBody::Disk(_))
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match self {
            ConvexBody::Polygon(p) => Some(p),
            ConvexBody::Disk(_) => None,
        }
    }

    /// Reference point: polygon centroid or disk center.
    pub fn center(&self) -> Point2 {
        match self {
            ConvexBody::Polygon(p) => p.centroid(),
            ConvexBody::Disk(d) => d.center,
        }
    }

    pub fn translate(&self, t: Point2) -> ConvexBody {
        match self {
            ConvexBody::Polygon(p) => ConvexBody::Polygon(p.translate(t)),
            ConvexBody::Disk(d) => ConvexBody::Disk(Disk { center: d.center + t, radius: d.radius }),
        }
    }

    /// Homothety about the origin with ratio `s > 0`.
    pub fn scale(&self, s: f64) -> ConvexBody {
        match self {
            ConvexBody::Polygon(p) => ConvexBody::Polygon(p.scale(s)),
            ConvexBody::Disk(d) => ConvexBody::Disk(Disk { center: d.center * s, radius: d.radius * s }),
        }
    }

    /// Point reflection through the origin.
    pub fn reflect(&self) -> ConvexBody {
        match self {
            ConvexBody::Polygon(p) => ConvexBody::Polygon(p.reflect()),
            ConvexBody::Disk(d) => ConvexBody::Disk(Disk { center: -d.center, radius: d.radius }),
        }
    }

    /// Point maximizing `<d, .>`. Ties (within `EPS`) go to the
    /// lexicographically largest point, comparing `x` then `y`.
    pub fn support_point(&self, d: Point2) -> Point2 {
        match self {
            ConvexBody::Disk(disk) => {
                let u = d.normalized().expect("support direction must be nonzero");
                disk.center + u * disk.radius
            }
            ConvexBody::Polygon(p) => {
                let scale = d.norm() * p.vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
                let best = p.vertices.iter().map(|v| d.dot(*v)).fold(f64::NEG_INFINITY, f64::max);
                p.vertices
                    .iter()
                    .copied()
                    .filter(|v| d.dot(*v) >= best - EPS * scale)
                    .max_by(|a, b| a.cmp_xy(b))
                    .expect("polygon has vertices")
            }
        }
    }

    /// Support function `h(d) = max <d, p>`.
    pub fn support_value(&self, d: Point2) -> f64 {
        match self {
            ConvexBody::Disk(disk) => d.dot(disk.center) + d.norm() * disk.radius,
            ConvexBody::Polygon(p) => p.vertices.iter().map(|v| d.dot(*v)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Extent of the body along unit direction `d`.
    pub fn width(&self, d: Point2) -> f64 {
        self.support_value(d) + self.support_value(-d)
    }

    /// Membership with boundary slack measured in the body's own scale:
    /// `p` is accepted when it lies in the homothet of the body about its
    /// center with ratio `1 + slack`.
    pub fn contains(&self, p: Point2, slack: f64) -> bool {
        match self {
            ConvexBody::Disk(d) => d.contains(p, slack),
            ConvexBody::Polygon(poly) => {
                if poly.is_point() {
                    return p.distance(poly.vertices[0]) <= slack;
                }
                let c = poly.centroid();
                poly.halfplanes()
                    .iter()
                    .all(|&(n, h)| n.dot(p) - h <= slack * (h - n.dot(c)))
            }
        }
    }

    /// Signed distance-like depth: positive inside, zero on the boundary,
    /// negative outside (exact Euclidean for disks, min edge slack for
    /// polygons).
    pub fn depth(&self, p: Point2) -> f64 {
        match self {
            ConvexBody::Disk(d) => d.radius - p.distance(d.center),
            ConvexBody::Polygon(poly) => {
                if poly.is_point() {
                    return -p.distance(poly.vertices[0]);
                }
                poly.halfplanes()
                    .iter()
                    .map(|&(n, h)| h - n.dot(p))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Points sampled on the boundary: polygon vertices plus `per_edge`
    /// points on every edge, or `count` evenly spaced disk points.
    pub fn boundary_samples(&self, count: usize) -> Vec<Point2> {
        match self {
            ConvexBody::Disk(d) => (0..count)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / count as f64;
                    d.center + Point2::from_angle(t) * d.radius
                })
                .collect(),
            ConvexBody::Polygon(p) => {
                let per_edge = (count / p.len().max(1)).max(1);
                let mut out = Vec::with_capacity(per_edge * p.len());
                for (a, b) in p.edges() {
                    for k in 0..per_edge {
                        out.push(a.lerp(b, k as f64 / per_edge as f64));
                    }
                }
                out
            }
        }
    }

    /// Largest distance of the body from its center; used to scale
    /// tolerances.
    pub fn radius_bound(&self) -> f64 {
        match self {
            ConvexBody::Disk(d) => d.radius,
            ConvexBody::Polygon(p) => {
                let c = p.centroid();
                p.vertices.iter().map(|v| v.distance(c)).fold(0.0, f64::max)
            }
        }
    }
}

/// Width of a finite point set along unit direction `d`.
pub fn point_width(points: &[Point2], d: Point2) -> f64 {
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let v = d.dot(*p);
        (lo.min(v), hi.max(v))
    });
    if points.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// JSON representation of a generator body.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub(crate) enum BodyRepr {
    Polygon {
        vertices: Vec<Point2>,
    },
    Disk {
        radius: f64,
        #[serde(default, skip_serializing_if = "is_origin")]
        center: Point2,
    },
}

fn is_origin(p: &Point2) -> bool {
    *p == Point2::ORIGIN
}

impl TryFrom<BodyRepr> for ConvexBody {
    type Error = GeometryError;

    fn try_from(repr: BodyRepr) -> Result<Self, Self::Error> {
        match repr {
            BodyRepr::Polygon { vertices } => ConvexBody::polygon(vertices),
            BodyRepr::Disk { radius, center } => ConvexBody::disk(center, radius),
        }
    }
}

impl From<ConvexBody> for BodyRepr {
    fn from(body: ConvexBody) -> Self {
        match body {
            ConvexBody::Polygon(p) => BodyRepr::Polygon { vertices: p.vertices },
            ConvexBody::Disk(d) => BodyRepr::Disk { radius: d.radius, center: d.center },
        }
    }
}

impl Serialize for ConvexBody {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BodyRepr::from(self.clone()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConvexBody {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BodyRepr::deserialize(deserializer)?;
        ConvexBody::try_from(repr).map_err(serde::de::Error::custom)
    }
}
