//! Three-disk covers of a unit-disk lens, of a half-strip of the lens, and
//! of any planar set of diameter at most one.

use std::sync::OnceLock;

use serde::Serialize;

use super::DiskError;
use crate::geometry::{circle_crossings, circumcircle, min_enclosing_circle, Disk, Point2};

const S3: f64 = 1.732_050_807_568_877_2;
/// Smallest center separation handled by [`lens_cover_three`].
pub const LENS_R0: f64 = 2.0 / S3;
/// Angle at the bottom tip between the lens axis and the chords to `c`, `e`.
pub const LENS_ANGLE_DEG: f64 = 25.0;
pub const STRIP_RADIUS: f64 = 0.49;

fn disk(center: Point2, radius: f64) -> Disk {
    Disk::new(center, radius.max(1e-12)).expect("finite positive radius")
}

/// Disk with `[u, v]` as a diameter.
pub fn diameter_disk(u: Point2, v: Point2) -> Disk {
    disk(u.midpoint(v), 0.5 * u.distance(v))
}

/// `B((-r/2, 0), 1) ∩ B((r/2, 0), 1)` with its tips `a` (top) and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LensRegion {
    pub r: f64,
    pub a: Point2,
    pub b: Point2,
}

impl LensRegion {
    pub fn new(r: f64) -> Self {
        assert!(r > 0.0 && r <= 2.0 + 1e-9, "lens separation {r} out of (0, 2]");
        let h = (1.0 - 0.25 * r * r).max(0.0).sqrt();
        Self { r, a: Point2::new(0.0, h), b: Point2::new(0.0, -h) }
    }

    /// Left and right unit disks, centered at `(-r/2, 0)` and `(r/2, 0)`.
    pub fn disks(&self) -> [Disk; 2] {
        [disk(Point2::new(-0.5 * self.r, 0.0), 1.0), disk(Point2::new(0.5 * self.r, 0.0), 1.0)]
    }

    pub fn contains(&self, p: Point2, slack: f64) -> bool {
        self.disks().iter().all(|d| p.distance(d.center) <= 1.0 + slack)
    }

    /// Boundary arcs plus an interior grid, about `n` points in all.
    pub fn samples(&self, n: usize) -> Vec<Point2> {
        let half_angle = (self.a.y).atan2(0.5 * self.r);
        let arc = n / 4;
        let mut out = Vec::with_capacity(n);
        for i in 0..=arc {
            let t = -half_angle + 2.0 * half_angle * i as f64 / arc as f64;
            // Right arc belongs to the left disk and vice versa.
            out.push(Point2::new(-0.5 * self.r, 0.0) + Point2::from_angle(t));
            out.push(Point2::new(0.5 * self.r, 0.0) - Point2::from_angle(t));
        }
        let side = ((n - out.len().min(n)) as f64).sqrt().ceil().max(2.0) as usize * 2;
        let half_w = 1.0 - 0.5 * self.r;
        for i in 0..=side {
            for j in 0..=side {
                let p = Point2::new(
                    -half_w + 2.0 * half_w * i as f64 / side as f64,
                    self.b.y + (self.a.y - self.b.y) * j as f64 / side as f64,
                );
                if self.contains(p, 0.0) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// The lens construction at `r0 = 2/√3`: points `c`, `e` on the boundary at
/// 25° from the axis at `b`, with the three disks built from them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LensCover {
    pub lens: LensRegion,
    pub c: Point2,
    pub e: Point2,
    pub disks: [Disk; 3],
}

/// Second point where the ray from `from` (on the circle) leaves the unit
/// circle around `center`.
fn ray_exit(center: Point2, from: Point2, dir: Point2) -> Point2 {
    from + dir * (2.0 * dir.dot(center - from))
}

fn build_lens_cover() -> LensCover {
    let lens = LensRegion::new(LENS_R0);
    let [left, right] = lens.disks();
    let t = LENS_ANGLE_DEG.to_radians();
    // c is on the boundary of the right disk (the left arc), e on the left one.
    let c = ray_exit(right.center, lens.b, Point2::new(-t.sin(), t.cos()));
    let e = ray_exit(left.center, lens.b, Point2::new(t.sin(), t.cos()));
    let (oc, rc) = circumcircle(lens.a, c, e).expect("a, c, e are not collinear");
    let disks = [disk(oc, rc), diameter_disk(c, lens.b), diameter_disk(lens.b, e)];
    LensCover { lens, c, e, disks }
}

pub fn lens_cover() -> &'static LensCover {
    static COVER: OnceLock<LensCover> = OnceLock::new();
    COVER.get_or_init(build_lens_cover)
}

/// Three disks of diameter below one covering `A(r)` for `r ∈ [2/√3, 2]`;
/// lenses shrink as `r` grows, so the cover at `2/√3` is reused.
pub fn lens_cover_three(r: f64) -> [Disk; 3] {
    assert!((LENS_R0 - 1e-9..=2.0 + 1e-9).contains(&r), "lens separation {r} outside [2/√3, 2]");
    lens_cover().disks
}

/// Points and disks of the half-lens covers inside `A(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StripFrame {
    pub lens: LensRegion,
    pub p: Point2,
    pub q: Point2,
    pub s: Point2,
    pub z: Point2,
    pub w: Point2,
    pub x: Point2,
    pub y: Point2,
    pub o1: Point2,
    pub q_prime: Point2,
    pub s_prime: Point2,
    /// Angle `q a o` in degrees.
    pub alpha_deg: f64,
    /// Cover of the lens above the line `xy`.
    pub upper: [Disk; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StripSide {
    Upper,
    Lower,
}

/// Crossing of a circle with the lens boundary on the given side of the axis.
fn lens_crossing(lens: &LensRegion, circle: &Disk, left: bool) -> Point2 {
    let [ld, rd] = lens.disks();
    // The left boundary arc belongs to the right disk.
    let arc = if left { rd } else { ld };
    circle_crossings(circle, &arc)
        .into_iter()
        .filter(|p| lens.contains(*p, 1e-9) && (p.x < 0.0) == left)
        .max_by(|a, b| a.y.total_cmp(&b.y))
        .expect("circle meets the lens boundary")
}

/// Horizontal chord of the lens at height `h`.
fn chord(lens: &LensRegion, h: f64) -> (Point2, Point2) {
    let half = (1.0 - h * h).sqrt() - 0.5 * lens.r;
    (Point2::new(-half, h), Point2::new(half, h))
}

fn build_strip_frame() -> StripFrame {
    let lens = LensRegion::new(1.0);
    let p = Point2::new(0.0, 1.0 / S3);
    let around_minus_p = disk(-p, 1.0);
    let q = lens_crossing(&lens, &around_minus_p, true);
    let s = lens_crossing(&lens, &around_minus_p, false);
    let (z, w) = chord(&lens, p.y);
    let (x, y) = chord(&lens, -p.y);
    let (o1, _) = circumcircle(lens.a, q, s).expect("a, q, s are not collinear");
    let top = disk(o1, STRIP_RADIUS);
    let q_prime = lens_crossing(&lens, &top, true);
    let s_prime = lens_crossing(&lens, &top, false);
    let (qa, oa) = (q - lens.a, Point2::ORIGIN - lens.a);
    let alpha_deg = (qa.cross(oa).abs()).atan2(qa.dot(oa)).to_degrees();
    let upper = [diameter_disk(-p, q_prime), diameter_disk(-p, s_prime), top];
    StripFrame { lens, p, q, s, z, w, x, y, o1, q_prime, s_prime, alpha_deg, upper }
}

pub fn strip_frame() -> &'static StripFrame {
    static FRAME: OnceLock<StripFrame> = OnceLock::new();
    FRAME.get_or_init(build_strip_frame)
}

impl StripFrame {
    pub fn cover(&self, side: StripSide) -> [Disk; 3] {
        match side {
            StripSide::Upper => self.upper,
            StripSide::Lower => self.upper.map(|d| disk(Point2::new(d.center.x, -d.center.y), d.radius)),
        }
    }
}

/// Cover for points inside `A(1)` (centered frame): the upper half-lens
/// cover unless some point lies strictly below the chord `xy`.
pub fn strip_cover_three(points: &[Point2], frame: &StripFrame) -> Result<(StripSide, [Disk; 3]), DiskError> {
    let tol = 1e-9;
    let above = points.iter().any(|q| q.y > frame.z.y + tol);
    let below = points.iter().any(|q| q.y < frame.x.y - tol);
    let side = match (above, below) {
        (true, true) => return Err(DiskError::RegionConflict),
        (false, true) => StripSide::Lower,
        _ => StripSide::Upper,
    };
    Ok((side, frame.cover(side)))
}

/// Regular hexagon of width one containing the set, cut into three
/// pentagons; each piece's circumscribed disk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BorsukCover {
    pub theta: f64,
    pub center: Point2,
    pub disks: [Disk; 3],
}

fn mid_projection(points: &[Point2], phi: f64) -> f64 {
    let n = Point2::from_angle(phi);
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(n.dot(*p)), hi.max(n.dot(*p))));
    0.5 * (lo + hi)
}

/// Signed gap between the three strip midlines; it flips sign over 60°.
fn balance(points: &[Point2], theta: f64) -> f64 {
    let sixty = std::f64::consts::FRAC_PI_3;
    mid_projection(points, theta) - mid_projection(points, theta + sixty)
        + mid_projection(points, theta + 2.0 * sixty)
}

pub fn borsuk_three_cover(points: &[Point2]) -> BorsukCover {
    assert!(!points.is_empty(), "cover of an empty set");
    let (mc, mr) = min_enclosing_circle(points);
    if 2.0 * mr <= S3 / 2.0 {
        let d = disk(mc, mr);
        return BorsukCover { theta: 0.0, center: mc, disks: [d; 3] };
    }
    let sixty = std::f64::consts::FRAC_PI_3;
    let (mut lo, mut hi) = (0.0, sixty);
    let f_lo = balance(points, lo);
    let theta = if f_lo == 0.0 {
        0.0
    } else {
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (balance(points, mid) > 0.0) == (f_lo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    // Midlines <n(θ), c> = m(θ) and <n(θ+120°), c> = m(θ+120°) meet at c.
    let (n0, n2) = (Point2::from_angle(theta), Point2::from_angle(theta + 2.0 * sixty));
    let (m0, m2) = (mid_projection(points, theta), mid_projection(points, theta + 2.0 * sixty));
    let det = n0.cross(n2);
    let center = Point2::new((m0 * n2.y - m2 * n0.y) / det, (n0.x * m2 - n2.x * m0) / det);
    let circum = 1.0 / S3;
    let disks = [0, 1, 2].map(|k| {
        let base = theta + 2.0 * sixty * k as f64;
        let piece = [
            center,
            center + Point2::from_angle(base) * 0.5,
            center + Point2::from_angle(base + 0.5 * sixty) * circum,
            center + Point2::from_angle(base + 1.5 * sixty) * circum,
            center + Point2::from_angle(base + 2.0 * sixty) * 0.5,
        ];
        let (c, r) = min_enclosing_circle(&piece);
        disk(c, r)
    });
    BorsukCover { theta, center, disks }
}
