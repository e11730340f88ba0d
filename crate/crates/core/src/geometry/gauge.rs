//! Minkowski gauges (norms whose unit ball is a centrally symmetric body).

use super::body::{minkowski_sum, ConvexBody, Disk, Polygon};
use super::point::{lowest_point_of, Point2};
use super::region::intersect_all;
use super::{GeometryError, TAU_SYM};

/// A Minkowski norm with a centrally symmetric unit ball centered at the
/// origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauge {
    unit_ball: ConvexBody,
    /// Edge normals scaled by the inverse edge offset; the norm of `v` is
    /// `max <a, v>` over these rows. Empty for disk gauges.
    rows: Vec<Point2>,
}

impl Gauge {
    pub fn new(unit_ball: ConvexBody) -> Result<Self, GeometryError> {
        let scale = unit_ball.radius_bound().max(1e-300);
        match &unit_ball {
            ConvexBody::Disk(d) => {
                if d.center.norm() > TAU_SYM * scale {
                    return Err(GeometryError::NotSymmetric);
                }
                Ok(Self { unit_ball: ConvexBody::Disk(Disk { center: Point2::ORIGIN, radius: d.radius }), rows: Vec::new() })
            }
            ConvexBody::Polygon(p) => {
                if p.is_point() {
                    return Err(GeometryError::Degenerate);
                }
                let symmetric = p.vertices().iter().all(|&v| {
                    p.vertices().iter().any(|&w| (w + v).norm() <= TAU_SYM * scale)
                });
                if !symmetric {
                    return Err(GeometryError::NotSymmetric);
                }
                let halfplanes = p.halfplanes();
                if halfplanes.iter().any(|&(_, h)| h <= TAU_SYM * scale) {
                    return Err(GeometryError::OriginNotInterior);
                }
                let rows = halfplanes.iter().map(|&(n, h)| n / h).collect();
                Ok(Self { unit_ball, rows })
            }
        }
    }

    pub fn unit_ball(&self) -> &ConvexBody {
        &self.unit_ball
    }

    pub fn is_euclidean(&self) -> bool {
        self.unit_ball.is_disk()
    }

    /// The norm of a vector.
    pub fn norm(&self, v: Point2) -> f64 {
        match &self.unit_ball {
            ConvexBody::Disk(d) => v.norm() / d.radius,
            ConvexBody::Polygon(_) => self.rows.iter().map(|a| a.dot(v)).fold(0.0, f64::max),
        }
    }

    /// Gauge distance `rho(p, q)`.
    pub fn distance(&self, p: Point2, q: Point2) -> f64 {
        self.norm(q - p)
    }

    /// The ball of radius `r` around `center`.
    pub fn ball(&self, center: Point2, r: f64) -> ConvexBody {
        self.unit_ball.scale(r).translate(center)
    }

    /// Boundary point of the unit ball in direction `d`.
    pub fn boundary_point(&self, d: Point2) -> Point2 {
        d / self.norm(d)
    }

    /// Lowest point of the unit ball (minimum `y`, then minimum `x`).
    pub fn lowest_point(&self) -> Point2 {
        match &self.unit_ball {
            ConvexBody::Disk(d) => Point2::new(0.0, -d.radius),
            ConvexBody::Polygon(p) => lowest_point_of(p.vertices()).expect("vertices"),
        }
    }

    /// Gauge with the same unit ball scaled by `s`.
    pub fn scaled(&self, s: f64) -> Gauge {
        Gauge::new(self.unit_ball.scale(s)).expect("scaling preserves validity")
    }

    /// Smallest ball (in this gauge) containing all `points`, returned as
    /// `(center, radius)`. Disk gauges use the exact minimal enclosing
    /// circle; polygon gauges solve the small linear program
    /// `min r  s.t.  r + <a_k, c> >= max_i <a_k, p_i>` by vertex enumeration.
    pub fn enclosing_ball(&self, points: &[Point2]) -> (Point2, f64) {
        assert!(!points.is_empty(), "enclosing ball of empty set");
        if points.len() == 1 {
            return (points[0], 0.0);
        }
        if let ConvexBody::Disk(d) = &self.unit_ball {
            let (c, r) = min_enclosing_circle(points);
            return (c, r / d.radius);
        }
        let center = self.enclosing_center_lp(points).unwrap_or_else(|| self.enclosing_center_bisect(points));
        let radius = points.iter().map(|&p| self.distance(center, p)).fold(0.0, f64::max);
        (center, radius)
    }
}

impl Gauge {
    fn enclosing_center_lp(&self, points: &[Point2]) -> Option<Point2> {
        let rows = &self.rows;
        let rhs: Vec<f64> = rows.iter().map(|a| points.iter().map(|&p| a.dot(p)).fold(f64::MIN, f64::max)).collect();
        let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        let n = rows.len();
        let mut best: Option<(f64, Point2)> = None;
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let (a, b, c) = (rows[i], rows[j], rows[l]);
                    // Subtract the first equation to eliminate r.
                    let (u, v) = (b - a, c - a);
                    let det = u.cross(v);
                    if det.abs() <= 1e-14 * u.norm() * v.norm() {
                        continue;
                    }
                    let (du, dv) = (rhs[j] - rhs[i], rhs[l] - rhs[i]);
                    let center = Point2::new((du * v.y - dv * u.y) / det, (u.x * dv - v.x * du) / det);
                    let r = rhs[i] - a.dot(center);
                    if best.is_some_and(|(br, _)| r >= br) {
                        continue;
                    }
                    if (0..n).all(|k| r + rows[k].dot(center) >= rhs[k] - tol) {
                        best = Some((r, center));
                    }
                }
            }
        }
        best.map(|(_, c)| c)
    }

    pub(super) fn enclosing_center_bisect(&self, points: &[Point2]) -> Point2 {
        let mut hi = points.iter().map(|&p| self.distance(points[0], p)).fold(0.0, f64::max);
        if hi == 0.0 {
            return points[0];
        }
        let mut lo = 0.5 * hi;
        let center_at = |r: f64| {
            let balls: Vec<ConvexBody> = points.iter().map(|&p| self.ball(p, r)).collect();
            intersect_all(&balls).expect("same-kind bodies").lowest_point()
        };
        let mut center = center_at(hi).expect("radius = max distance from a point is feasible");
        while hi - lo > 1e-13 * hi {
            let mid = 0.5 * (lo + hi);
            match center_at(mid) {
                Some(c) => {
                    hi = mid;
                    center = c;
                }
                None => lo = mid,
            }
        }
        center
    }
}

/// The gauge whose unit ball is half the difference body, `(K + (-K)) / 2`.
/// Two translates `K + t1`, `K + t2` meet iff `rho(t1, t2) <= 2`.
pub fn difference_gauge(k: &ConvexBody) -> Gauge {
    let ball = match k {
        ConvexBody::Disk(d) => ConvexBody::Disk(Disk { center: Point2::ORIGIN, radius: d.radius }),
        ConvexBody::Polygon(p) => {
            let sum: Polygon = minkowski_sum(p, &p.reflect());
            ConvexBody::Polygon(sum.scale(0.5))
        }
    };
    Gauge::new(ball).expect("difference body is symmetric with interior origin")
}

/// Exact Euclidean minimal enclosing circle (incremental construction).
pub fn min_enclosing_circle(points: &[Point2]) -> (Point2, f64) {
    let fits = |c: Point2, r: f64, p: Point2| p.distance(c) <= r * (1.0 + 1e-12) + 1e-15;
    let mut c = points[0];
    let mut r = 0.0;
    for i in 1..points.len() {
        if fits(c, r, points[i]) {
            continue;
        }
        c = points[i];
        r = 0.0;
        for j in 0..i {
            if fits(c, r, points[j]) {
                continue;
            }
            c = points[i].midpoint(points[j]);
            r = c.distance(points[i]);
            for k in 0..j {
                if fits(c, r, points[k]) {
                    continue;
                }
                match super::circumcircle(points[i], points[j], points[k]) {
                    Some((cc, rr)) => {
                        c = cc;
                        r = rr;
                    }
                    None => {
                        // Collinear: the farthest pair spans the circle.
                        let trio = [points[i], points[j], points[k]];
                        let (a, b) = [(0, 1), (0, 2), (1, 2)]
                            .into_iter()
                            .max_by(|x, y| trio[x.0].distance(trio[x.1]).total_cmp(&trio[y.0].distance(trio[y.1])))
                            .map(|(x, y)| (trio[x], trio[y]))
                            .unwrap();
                        c = a.midpoint(b);
                        r = c.distance(a);
                    }
                }
            }
        }
    }
    (c, r)
}
