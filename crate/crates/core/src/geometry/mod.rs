//! Planar primitives: points, convex polygons, exact disks, Minkowski sums,
//! gauges, supports, widths and intersections.

mod body;
mod gauge;
mod point;
mod region;

pub use body::{convex_hull, minkowski_sum, point_width, ConvexBody, Disk, Polygon};
pub use gauge::{difference_gauge, min_enclosing_circle, Gauge};
pub use point::{lowest_point_of, orient, triangle_area, Point2};
pub use region::{boundary_crossings, circle_crossings, intersect, intersect_all, segment_crossings, Region};

/// Tolerance for orientation and containment predicates.
pub const EPS: f64 = 1e-9;
/// Vertices closer than this are merged during normalization.
pub const EPS_DEDUP: f64 = 1e-12;
/// Symmetry tolerance for gauge unit balls.
pub const TAU_SYM: f64 = 1e-9;
/// Boundary slack used when checking certificates.
pub const CERT_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("polygon has zero area")]
    Degenerate,
    #[error("points are not in convex position")]
    NotConvex,
    #[error("disk radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("body is not centrally symmetric about the origin")]
    NotSymmetric,
    #[error("origin is not interior to the unit ball")]
    OriginNotInterior,
    #[error("cannot intersect polygons with disks")]
    MixedBodies,
}

/// Whether `K + t1` and `K + t2` meet, decided through the difference
/// gauge: `rho(t1, t2) <= 2`.
pub fn translates_meet(gauge: &Gauge, t1: Point2, t2: Point2) -> bool {
    gauge.distance(t1, t2) <= 2.0 + EPS
}

/// Smallest circle through / around three points (Euclidean): returns the
/// circumcenter and radius of the triangle.
pub fn circumcircle(a: Point2, b: Point2, c: Point2) -> Option<(Point2, f64)> {
    let d = 2.0 * orient(a, b, c);
    if d.abs() < 1e-300 {
        return None;
    }
    let (ba, ca) = (b - a, c - a);
    let (bb, cc) = (ba.norm_sq(), ca.norm_sq());
    let ux = (ca.y * bb - ba.y * cc) / d;
    let uy = (ba.x * cc - ca.x * bb) / d;
    let center = a + Point2::new(ux, uy);
    Some((center, center.distance(a)))
}

#[cfg(test)]
mod tests;
