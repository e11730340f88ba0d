//! The hexagon `T1 ∩ T2` of a point set and the three-triangle sweep.
//!
//! Everything lives in the frame of the regular unit triangle
//! `U = conv{(0,0), (1,0), (1/2, √3/2)}` with outward side normals
//! `u1` (bottom), `u2` (left), `u3` (right). A regular triangle positively
//! homothetic to `U` is `{y : <u_i, y> <= e_i}`, with side `(2/√3) Σ e_i`.

use serde::Serialize;

use super::TriangleError;
use crate::geometry::{ConvexBody, Point2, EPS};

pub(crate) const S3: f64 = 1.732_050_807_568_877_2;
const HALF_S3: f64 = S3 / 2.0;

/// Outward normals of the sides of the unit triangle.
pub const NORMALS: [Point2; 3] = [
    Point2 { x: 0.0, y: -1.0 },
    Point2 { x: -HALF_S3, y: 0.5 },
    Point2 { x: HALF_S3, y: 0.5 },
];

/// Side offsets of `U` itself.
const UNIT_OFFSETS: [f64; 3] = [0.0, 0.0, HALF_S3];

const TOL: f64 = 1e-9;

/// Point where `<n_i, y> = e_i` and `<n_j, y> = e_j`.
fn meet(i: usize, ei: f64, j: usize, ej: f64) -> Point2 {
    let (a, b) = (NORMALS[i], NORMALS[j]);
    let det = a.cross(b);
    Point2::new((ei * b.y - ej * a.y) / det, (a.x * ej - b.x * ei) / det)
}

/// Vertices (bottom-left, bottom-right, top) of `{<n_i, y> <= e_i}`.
pub fn triangle_vertices(e: [f64; 3]) -> [Point2; 3] {
    [meet(0, e[0], 1, e[1]), meet(0, e[0], 2, e[2]), meet(1, e[1], 2, e[2])]
}

pub fn side_of(e: [f64; 3]) -> f64 {
    (2.0 / S3) * (e[0] + e[1] + e[2])
}

/// Translation `v` with `U + v = {<n_i, y> <= e_i}`; requires side 1.
fn unit_translation(e: [f64; 3]) -> Point2 {
    let y = -(e[0] - UNIT_OFFSETS[0]);
    let x = (0.5 * y - (e[1] - UNIT_OFFSETS[1])) * 2.0 / S3;
    Point2::new(x, y)
}

fn support(points: &[Point2], n: Point2) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let v = n.dot(*p);
        (lo.min(v), hi.max(v))
    })
}

/// Widths of `points` in the three side-normal directions.
pub fn side_widths(points: &[Point2]) -> [f64; 3] {
    NORMALS.map(|n| {
        let (lo, hi) = support(points, n);
        hi - lo
    })
}

/// `T1 ∩ T2` for a point set, vertices labelled clockwise with `AB`, `CD`,
/// `EF` on sides 1, 2, 3 of `T1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HexagonFrame {
    /// Side of `T1`.
    pub a: f64,
    /// Support values: `T1 = {<n_i, y> <= c_i}`, `T2 = {<n_i, y> >= d_i}`.
    pub c: [f64; 3],
    pub d: [f64; 3],
    /// Vertices of `T1` (bottom-left, bottom-right, top) and of `T2`.
    pub t1: [Point2; 3],
    pub t2: [Point2; 3],
    /// `A, B, C, D, E, F`.
    pub vertices: [Point2; 6],
    /// `AB, BC, CD, DE, EF, FA`.
    pub sides: [f64; 6],
    /// Widths per side direction, and the same sorted ascending.
    pub widths: [f64; 3],
    pub sorted_widths: [f64; 3],
}

fn toward(from: Point2, to: Point2, dist: f64) -> Point2 {
    match (to - from).normalized() {
        Some(d) => from + d * dist,
        None => from,
    }
}

pub fn hexagon_frame(points: &[Point2]) -> HexagonFrame {
    assert!(!points.is_empty(), "hexagon of an empty set");
    let mut c = [0.0; 3];
    let mut d = [0.0; 3];
    for i in 0..3 {
        (d[i], c[i]) = support(points, NORMALS[i]);
    }
    let widths = [c[0] - d[0], c[1] - d[1], c[2] - d[2]];
    let mut sorted_widths = widths;
    sorted_widths.sort_by(f64::total_cmp);
    let a = side_of(c);
    let t1 = triangle_vertices(c);
    let t2 = [meet(0, d[0], 1, d[1]), meet(0, d[0], 2, d[2]), meet(1, d[1], 2, d[2])];
    let [bl, br, top] = t1;
    // Corner cut opposite side i has side a - 2 h_i / √3.
    let cut = widths.map(|h| (a - 2.0 * h / S3).max(0.0));
    let vertices = [
        toward(br, bl, cut[1]),
        toward(bl, br, cut[2]),
        toward(bl, top, cut[2]),
        toward(top, bl, cut[0]),
        toward(top, br, cut[0]),
        toward(br, top, cut[1]),
    ];
    let (h1, h2, h3) = (widths[0], widths[1], widths[2]);
    let sides = [
        (2.0 / S3) * (h2 + h3) - a,
        a - 2.0 * h3 / S3,
        (2.0 / S3) * (h1 + h3) - a,
        a - 2.0 * h1 / S3,
        (2.0 / S3) * (h1 + h2) - a,
        a - 2.0 * h2 / S3,
    ];
    HexagonFrame { a, c, d, t1, t2, vertices, sides, widths, sorted_widths }
}

impl HexagonFrame {
    pub fn perimeter(&self) -> f64 {
        self.sides.iter().map(|s| s.max(0.0)).sum()
    }

    /// Arc position (clockwise from `A`) of each vertex, plus the perimeter.
    pub fn arc_starts(&self) -> [f64; 7] {
        let mut out = [0.0; 7];
        for i in 0..6 {
            out[i + 1] = out[i] + self.sides[i].max(0.0);
        }
        out
    }

    /// Boundary point at clockwise arc length `s` from `A`.
    pub fn point_at(&self, s: f64) -> Point2 {
        let starts = self.arc_starts();
        let p = starts[6];
        if p <= 0.0 {
            return self.vertices[0];
        }
        let s = s.rem_euclid(p);
        let i = (0..6).rev().find(|&i| starts[i] <= s).unwrap_or(0);
        let len = starts[i + 1] - starts[i];
        if len <= 0.0 {
            return self.vertices[i];
        }
        self.vertices[i].lerp(self.vertices[(i + 1) % 6], ((s - starts[i]) / len).clamp(0.0, 1.0))
    }

    /// The hexagon as a body (falls back to `T1` when degenerate).
    pub fn body(&self) -> Option<ConvexBody> {
        ConvexBody::polygon(self.vertices.to_vec()).ok()
    }
}

/// Which case of the start-position rule produced a [`SweepState`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InitialCase {
    /// `K*` already on `BC`.
    One,
    /// `L*` reached `D` first (also taken on ties).
    TwoOne,
    /// `K*` reached `C` first.
    TwoTwo,
}

/// Arc positions (clockwise from `A`) of `K ∈ BC`, `L ∈ DE`, `M ∈ FA`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepState {
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub case: InitialCase,
}

/// Start positions: `M* = A`, `K*` and `L*` at arc distance 1 clockwise
/// and counter-clockwise; slides `M*` toward `F` when `K*` is past `C`.
pub fn initial_klm(frame: &HexagonFrame) -> Result<SweepState, TriangleError> {
    if frame.a <= 1.0 {
        return Err(TriangleError::AssertionFailed("initial positions need a > 1"));
    }
    let s = frame.arc_starts();
    let p = s[6];
    let tol = TOL * frame.a.max(1.0);
    let l_star = p - 1.0;
    if l_star < s[3] - tol || l_star > s[4] + tol {
        return Err(TriangleError::AssertionFailed("L* lies on DE"));
    }
    if s[1] > 1.0 + tol {
        return Err(TriangleError::AssertionFailed("arc from M* to K* contains B"));
    }
    let state = if 1.0 <= s[2] + tol {
        SweepState { k: 1.0, l: l_star, m: p, case: InitialCase::One }
    } else {
        let shift_l = l_star - s[3];
        let shift_k = 1.0 - s[2];
        if shift_l <= shift_k {
            SweepState { k: s[2], l: s[3], m: p - shift_l, case: InitialCase::TwoOne }
        } else {
            SweepState { k: s[2], l: l_star - shift_k, m: p - shift_k, case: InitialCase::TwoTwo }
        }
    };
    if state.m < s[5] - tol {
        return Err(TriangleError::AssertionFailed("L* reaches D before M* reaches F"));
    }
    Ok(SweepState {
        k: state.k.clamp(s[1], s[2]),
        l: state.l.clamp(s[3], s[4]),
        m: state.m.clamp(s[5], s[6]),
        case: state.case,
    })
}

/// Side offsets of `Q1, Q2, Q3` for a state.
fn q_offsets(frame: &HexagonFrame, st: &SweepState) -> [[f64; 3]; 3] {
    let [n1, n2, n3] = NORMALS;
    let (k, l, m) = (frame.point_at(st.k), frame.point_at(st.l), frame.point_at(st.m));
    [
        [frame.c[0], n2.dot(k), n3.dot(m)],
        [n1.dot(k), frame.c[1], n3.dot(l)],
        [n1.dot(m), n2.dot(l), frame.c[2]],
    ]
}

/// Hole predicates: an uncovered point must lie beyond the inner sides of
/// `Q1, Q2, Q3` in one of two cyclic patterns. Each pattern region is a
/// negative triangle, non-empty exactly when its value is positive.
fn hole_values(frame: &HexagonFrame, st: &SweepState) -> (f64, f64) {
    let [n1, n2, n3] = NORMALS;
    let (k, l, m) = (frame.point_at(st.k), frame.point_at(st.l), frame.point_at(st.m));
    let ccw = -(n2.dot(k) + n3.dot(l) + n1.dot(m));
    let cw = -(n3.dot(m) + n1.dot(k) + n2.dot(l));
    (ccw, cw)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Hole {
    None,
    Ccw,
    Cw,
}

pub fn detect_hole(frame: &HexagonFrame, st: &SweepState) -> Hole {
    let (ccw, cw) = hole_values(frame, st);
    let tol = TOL * frame.a.max(1.0);
    assert!(!(ccw > tol && cw > tol), "both hole types at once");
    if ccw > tol {
        Hole::Ccw
    } else if cw > tol {
        Hole::Cw
    } else {
        Hole::None
    }
}

/// Three regular triangles and unit translates of `U` containing them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangleCoverTriple {
    /// `Q1, Q2, Q3` as side offsets.
    pub q: [[f64; 3]; 3],
    pub q_sides: [f64; 3],
    /// Vertices of `Q1, Q2, Q3` in the frame of the covered points.
    pub q_triangles: [[Point2; 3]; 3],
    /// Translations `v` with `Q_i ⊂ U + v_i`.
    pub translates: [Point2; 3],
    pub state: Option<SweepState>,
}

impl TriangleCoverTriple {
    fn from_offsets(q: [[f64; 3]; 3], state: Option<SweepState>) -> Self {
        let q_sides = q.map(side_of);
        let translates = q.map(|e| {
            let grow = (HALF_S3 - e.iter().sum::<f64>()) / 3.0;
            unit_translation([e[0] + grow, e[1] + grow, e[2] + grow])
        });
        Self { q, q_sides, q_triangles: q.map(triangle_vertices), translates, state }
    }

    pub fn unit_triangles(&self) -> [ConvexBody; 3] {
        self.translates.map(|v| unit_triangle().translate(v))
    }

    pub fn covers(&self, points: &[Point2], slack: f64) -> bool {
        let tris = self.unit_triangles();
        points.iter().all(|&p| tris.iter().any(|t| t.contains(p, slack)))
    }
}

pub fn unit_triangle() -> ConvexBody {
    ConvexBody::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, HALF_S3)])
        .expect("unit triangle")
}

/// Moves all three points by `t` along the boundary (positive is clockwise).
fn shifted(st: &SweepState, t: f64) -> SweepState {
    SweepState { k: st.k + t, l: st.l + t, m: st.m + t, case: st.case }
}

/// The `D3` symmetries of `U` about its centroid, as `(rotation steps, mirror)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Symmetry {
    turns: u8,
    mirror: bool,
}

const CENTROID: Point2 = Point2 { x: 0.5, y: S3 / 6.0 };

impl Symmetry {
    fn linear(self, v: Point2) -> Point2 {
        let v = if self.mirror { Point2::new(-v.x, v.y) } else { v };
        v.rotated(std::f64::consts::TAU / 3.0 * self.turns as f64)
    }

    fn inverse_linear(self, v: Point2) -> Point2 {
        let v = v.rotated(-std::f64::consts::TAU / 3.0 * self.turns as f64);
        if self.mirror {
            Point2::new(-v.x, v.y)
        } else {
            v
        }
    }

    fn apply(self, p: Point2) -> Point2 {
        CENTROID + self.linear(p - CENTROID)
    }

    fn inverse_apply(self, p: Point2) -> Point2 {
        CENTROID + self.inverse_linear(p - CENTROID)
    }

    fn all() -> impl Iterator<Item = Symmetry> {
        (0..3u8).flat_map(|turns| [false, true].map(|mirror| Symmetry { turns, mirror }))
    }
}

/// Three translates of `U` covering `points`, by the hexagon sweep.
pub fn triangle_three_cover(points: &[Point2]) -> Result<TriangleCoverTriple, TriangleError> {
    if points.is_empty() {
        return Err(TriangleError::EmptySet);
    }
    let sorted = hexagon_frame(points).sorted_widths;
    if sorted[1] > HALF_S3 + 1e-9 || sorted.iter().sum::<f64>() > 3.0 * HALF_S3 + 1e-9 {
        return Err(TriangleError::ConditionsNotMet { widths: sorted });
    }
    // Relabel so the widths along n1, n2, n3 are ascending.
    let (sym, moved) = Symmetry::all()
        .map(|s| (s, points.iter().map(|&p| s.apply(p)).collect::<Vec<_>>()))
        .find(|(_, pts)| {
            let w = side_widths(pts);
            w[0] <= w[1] + EPS && w[1] <= w[2] + EPS
        })
        .expect("some symmetry sorts the widths");
    let cover = cover_in_sorted_frame(&hexagon_frame(&moved), &moved)?;
    // Map the translates back: S^-1 (U + v) = U + L^-1 v.
    let back = TriangleCoverTriple {
        translates: cover.translates.map(|v| sym.inverse_linear(v)),
        q_triangles: cover.q_triangles.map(|t| t.map(|p| sym.inverse_apply(p))),
        ..cover
    };
    if !back.covers(points, crate::geometry::CERT_SLACK) {
        return Err(TriangleError::SweepFailed);
    }
    Ok(back)
}

fn cover_in_sorted_frame(frame: &HexagonFrame, points: &[Point2]) -> Result<TriangleCoverTriple, TriangleError> {
    if frame.a <= 1.0 + TOL {
        let t1 = frame.c;
        return Ok(TriangleCoverTriple::from_offsets([t1, t1, t1], None));
    }
    let start = initial_klm(frame)?;
    let s = frame.arc_starts();
    let back = (start.k - s[1]).min(start.l - s[3]).min(start.m - s[5]).max(0.0);
    let fwd = (s[2] - start.k).min(s[4] - start.l).min(s[6] - start.m).max(0.0);

    // Both hole values are affine in the shift while K, L, M stay on their
    // sides; pick the shift with the largest margin.
    let (ccw0, cw0) = hole_values(frame, &shifted(&start, -back));
    let (ccw1, cw1) = hole_values(frame, &shifted(&start, fwd));
    let span = back + fwd;
    let at = |t: f64| {
        let f = if span > 0.0 { (t + back) / span } else { 0.0 };
        let ccw = ccw0 + (ccw1 - ccw0) * f;
        let cw = cw0 + (cw1 - cw0) * f;
        -ccw.max(cw)
    };
    let mut candidates = vec![-back, fwd, 0.0];
    let (dc, dw) = (ccw1 - ccw0, cw1 - cw0);
    if (dc - dw).abs() > 0.0 && span > 0.0 {
        let f = (cw0 - ccw0) / (dc - dw);
        if (0.0..=1.0).contains(&f) {
            candidates.push(-back + f * span);
        }
    }
    candidates.sort_by(|a, b| at(*b).total_cmp(&at(*a)).then(a.total_cmp(b)));
    let tol = TOL * frame.a.max(1.0);
    for &t in &candidates {
        let st = shifted(&start, t);
        if detect_hole(frame, &st) == Hole::None {
            let triple = TriangleCoverTriple::from_offsets(q_offsets(frame, &st), Some(st));
            if triple.q_sides.iter().all(|&side| side <= 1.0 + tol) && triple.covers(points, crate::geometry::CERT_SLACK)
            {
                return Ok(triple);
            }
        }
    }
    Err(TriangleError::SweepFailed)
}
