//! Three-point piercing for triangle translates: affine normalization to the
//! regular unit triangle, a hexagon sweep covering one family by three
//! translates, and a width witness when no family qualifies.

mod hexagon;

use serde::Serialize;

use crate::geometry::{ConvexBody, Point2};
use crate::instance::{CertificateFault, ColoredInstance, CrossPair, PiercingCertificate, Scope};

pub use hexagon::{
    detect_hole, hexagon_frame, initial_klm, side_widths, triangle_three_cover, triangle_vertices, unit_triangle,
    HexagonFrame, Hole, InitialCase, SweepState, TriangleCoverTriple, NORMALS,
};

const HALF_S3: f64 = hexagon::S3 / 2.0;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TriangleError {
    #[error("generator is not a triangle")]
    NotTriangle,
    #[error("triangle is degenerate")]
    DegenerateTriangle,
    #[error("empty point set")]
    EmptySet,
    #[error("need at least three families, got {0}")]
    TooFewFamilies(usize),
    #[error("widths {widths:?} do not admit a three-triangle cover")]
    ConditionsNotMet { widths: [f64; 3] },
    #[error("sweep location fact failed: {0}")]
    AssertionFailed(&'static str),
    #[error("no hole-free sweep position covers the set")]
    SweepFailed,
    #[error("translates {0:?} of different colors do not meet")]
    InvalidInstance(CrossPair),
    #[error(transparent)]
    Certificate(#[from] CertificateFault),
}

/// `y -> m y + b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AffineMap {
    pub m: [[f64; 2]; 2],
    pub b: Point2,
}

impl AffineMap {
    pub fn linear(&self, v: Point2) -> Point2 {
        Point2::new(self.m[0][0] * v.x + self.m[0][1] * v.y, self.m[1][0] * v.x + self.m[1][1] * v.y)
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        self.linear(p) + self.b
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> AffineMap {
        let d = self.det();
        let m = [[self.m[1][1] / d, -self.m[0][1] / d], [-self.m[1][0] / d, self.m[0][0] / d]];
        let lin = AffineMap { m, b: Point2::ORIGIN };
        AffineMap { m, b: -lin.linear(self.b) }
    }
}

/// Affine map sending the triangle onto `conv{(0,0), (1,0), (1/2, √3/2)}`,
/// its lowest vertex to the origin, with the inverse.
pub fn affine_normalize(t: &ConvexBody) -> Result<(AffineMap, AffineMap), TriangleError> {
    let v = match t.as_polygon() {
        Some(p) if p.len() == 3 => p.vertices().to_vec(),
        Some(p) if p.len() < 3 => return Err(TriangleError::DegenerateTriangle),
        _ => return Err(TriangleError::NotTriangle),
    };
    let (e1, e2) = (v[1] - v[0], v[2] - v[0]);
    let det = e1.cross(e2);
    if det.abs() <= 1e-12 * e1.norm_sq().max(e2.norm_sq()) {
        return Err(TriangleError::DegenerateTriangle);
    }
    // Columns: target edges times inverse of source edges.
    let (f1, f2) = (Point2::new(1.0, 0.0), Point2::new(0.5, HALF_S3));
    let inv = [[e2.y / det, -e2.x / det], [-e1.y / det, e1.x / det]];
    let m = [
        [f1.x * inv[0][0] + f2.x * inv[1][0], f1.x * inv[0][1] + f2.x * inv[1][1]],
        [f1.y * inv[0][0] + f2.y * inv[1][0], f1.y * inv[0][1] + f2.y * inv[1][1]],
    ];
    let lin = AffineMap { m, b: Point2::ORIGIN };
    let map = AffineMap { m, b: -lin.linear(v[0]) };
    Ok((map, map.inverse()))
}

/// Two points, one from each set, more than `w` apart along `n`, whenever
/// the projection widths satisfy `w1 + w2 > 2w`.
pub fn width_witness_pair(x1: &[Point2], x2: &[Point2], n: Point2, w: f64) -> Option<(Point2, Point2)> {
    let extremes = |xs: &[Point2]| {
        let lo = xs.iter().copied().min_by(|a, b| n.dot(*a).total_cmp(&n.dot(*b)))?;
        let hi = xs.iter().copied().max_by(|a, b| n.dot(*a).total_cmp(&n.dot(*b)))?;
        Some((lo, hi))
    };
    let (lo1, hi1) = extremes(x1)?;
    let (lo2, hi2) = extremes(x2)?;
    let (w1, w2) = (n.dot(hi1) - n.dot(lo1), n.dot(hi2) - n.dot(lo2));
    if w1 + w2 <= 2.0 * w {
        return None;
    }
    let z1 = 0.5 * (n.dot(lo1) + n.dot(hi1));
    let z2 = 0.5 * (n.dot(lo2) + n.dot(hi2));
    let (a, b) = if z2 >= z1 { (lo1, hi2) } else { (hi1, lo2) };
    ((n.dot(b) - n.dot(a)).abs() > w).then_some((a, b))
}

/// Per-family data in the normalized covering frame.
struct NormalizedFamily {
    points: Vec<Point2>,
    widths: [f64; 3],
}

fn qualifies(widths: [f64; 3]) -> bool {
    let mut s = widths;
    s.sort_by(f64::total_cmp);
    s[1] <= HALF_S3 + 1e-9 && s.iter().sum::<f64>() <= 3.0 * HALF_S3 + 1e-9
}

/// Piercing by at most three points for an instance whose generator is a
/// triangle: the first family (by index) passing the width test is covered.
pub fn triangle_pierce(inst: &ColoredInstance) -> Result<PiercingCertificate, TriangleError> {
    let k = inst.num_families();
    if k < 3 {
        return Err(TriangleError::TooFewFamilies(k));
    }
    let (map, inv) = affine_normalize(&inst.generator)?;
    // c pierces T + t  iff  -M t lies in U - (M c + b).
    let fams: Vec<NormalizedFamily> = inst
        .families
        .iter()
        .map(|f| {
            let points: Vec<Point2> = f.translates.iter().map(|&t| -map.linear(t)).collect();
            let widths = side_widths(&points);
            NormalizedFamily { points, widths }
        })
        .collect();
    for (m, fam) in fams.iter().enumerate() {
        if !qualifies(fam.widths) {
            continue;
        }
        let cover = match triangle_three_cover(&fam.points) {
            Ok(c) => c,
            Err(TriangleError::SweepFailed | TriangleError::AssertionFailed(_)) => continue,
            Err(e) => return Err(e),
        };
        let points = cover.translates.iter().map(|&v| inv.apply(-v)).collect();
        let cert = PiercingCertificate::assign(inst, "triangle", m, points, Scope::Family)?;
        return Ok(cert.pruned());
    }
    Err(TriangleError::InvalidInstance(width_witness(inst, &fams)))
}

/// A cross pair separated along some side normal by more than the unit
/// triangle's width there, or else the worst cross pair by gauge distance.
fn width_witness(inst: &ColoredInstance, fams: &[NormalizedFamily]) -> CrossPair {
    let gauge = inst.gauge();
    let locate = |f: usize, p: Point2| fams[f].points.iter().position(|&q| q == p).expect("witness from the family");
    let mut pairs = Vec::new();
    for a in 0..fams.len() {
        for b in a + 1..fams.len() {
            for n in NORMALS {
                if let Some((p, q)) = width_witness_pair(&fams[a].points, &fams[b].points, n, HALF_S3) {
                    pairs.push(((a, locate(a, p)), (b, locate(b, q))));
                }
            }
        }
    }
    if pairs.is_empty() {
        pairs = inst.cross_pairs().collect();
    }
    let best = pairs
        .into_iter()
        .map(|((a, i), (b, j))| {
            let distance = gauge.distance(inst.families[a].translates[i], inst.families[b].translates[j]);
            CrossPair { family_a: a, index_a: i, family_b: b, index_b: j, distance }
        })
        .max_by(|x, y| x.distance.total_cmp(&y.distance));
    best.expect("at least two non-empty families")
}
