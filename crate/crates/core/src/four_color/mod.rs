//! Four colors: among rainbow triples with no common point, the largest
//! supporting hole triangle has a vertex in every translate of the fourth
//! color.

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{boundary_crossings, intersect_all, orient, triangle_area, ConvexBody, GeometryError, Point2, CERT_SLACK};
use crate::instance::{CertificateFault, ColoredInstance, PiercingCertificate, Scope};

pub const MAX_ITERATIONS: usize = 1000;
pub const MOVE_TOL: f64 = 1e-9;
pub const SUPPORT_GAP: f64 = 1e-7;
const SEED_ANGLES_DEG: [f64; 3] = [0.0, 40.0, 80.0];
const GRID: usize = 50;
const MIN_AREA: f64 = 1e-18;
const MIN_HEIGHT: f64 = 1e-12;
const NEWTON_STEPS: usize = 100;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FourColorError {
    #[error("the three bodies share a point")]
    NoHoleTriangle,
    #[error("no verified hole triangle was found")]
    IterationDiverged,
    #[error("need exactly four families, got {0}")]
    WrongFamilyCount(usize),
    #[error("translate {0} of the fourth family misses every vertex")]
    ClaimViolated(usize),
    #[error("no rainbow triple is empty and no family has a common point")]
    HellyFailed,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Certificate(#[from] CertificateFault),
}

/// A triangle `x1 x2 x3` with `x_i` in the `i`-th body, the line through
/// `x_i` parallel to the opposite side supporting that body, and no body
/// meeting the interior.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoleTriangle {
    pub vertices: [Point2; 3],
    pub area: f64,
    pub iterations: usize,
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RainbowTriple {
    pub colors: [usize; 3],
    pub indices: [usize; 3],
    pub triangle: HoleTriangle,
}

/// Unit normal of line `a b` pointing to the side of `toward`.
fn normal_toward(a: Point2, b: Point2, toward: Point2) -> Option<Point2> {
    let n = (b - a).perp().normalized()?;
    let s = n.dot(toward - a);
    if s.abs() <= MIN_HEIGHT {
        None
    } else {
        Some(if s > 0.0 { n } else { -n })
    }
}

/// Largest support gap over the three vertices; `None` when degenerate.
pub fn support_gaps(bodies: [&ConvexBody; 3], x: [Point2; 3]) -> Option<[f64; 3]> {
    let mut gaps = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let d = -normal_toward(x[j], x[k], x[i])?;
        gaps[i] = bodies[i].support_value(d) - d.dot(x[i]);
    }
    Some(gaps)
}

fn interior_is_free(bodies: [&ConvexBody; 3], x: [Point2; 3]) -> bool {
    let tol = 1e-9 * bodies.iter().map(|b| b.radius_bound()).fold(1.0, f64::max);
    for i in 1..GRID {
        for j in 1..GRID - i {
            let (a, b) = (i as f64 / GRID as f64, j as f64 / GRID as f64);
            let p = x[0] + (x[1] - x[0]) * a + (x[2] - x[0]) * b;
            if bodies.iter().any(|body| body.depth(p) > tol) {
                return false;
            }
        }
    }
    // Open edges may touch the bodies but never cross into them.
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        for s in 1..GRID {
            let p = x[i].lerp(x[j], s as f64 / GRID as f64);
            if bodies.iter().any(|body| body.depth(p) > tol) {
                return false;
            }
        }
    }
    true
}

/// Checks every defining property of a hole triangle.
pub fn verify_hole_triangle(bodies: [&ConvexBody; 3], x: [Point2; 3]) -> bool {
    if triangle_area(x[0], x[1], x[2]).abs() <= MIN_AREA {
        return false;
    }
    let inside = (0..3).all(|i| bodies[i].contains(x[i], 1e-9));
    let supported = support_gaps(bodies, x).is_some_and(|g| g.iter().all(|&v| v.abs() < SUPPORT_GAP));
    inside && supported && interior_is_free(bodies, x)
}

/// Rough centre of the hole: for each body, the crossing of the other two
/// boundaries that lies outside it and closest to it, averaged.
fn hole_center(bodies: [&ConvexBody; 3]) -> Option<Point2> {
    let mut sum = Point2::ORIGIN;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let best = boundary_crossings(bodies[j], bodies[k])
            .ok()?
            .into_iter()
            .filter(|&p| bodies[i].depth(p) <= 0.0)
            .max_by(|&p, &q| bodies[i].depth(p).total_cmp(&bodies[i].depth(q)))?;
        sum = sum + best;
    }
    Some(sum / 3.0)
}

fn initial_directions(bodies: [&ConvexBody; 3], hole: Option<Point2>, seed_deg: f64) -> [Point2; 3] {
    let centers = bodies.map(|b| b.center());
    std::array::from_fn(|i| {
        let target = hole.unwrap_or_else(|| centers[(i + 1) % 3].midpoint(centers[(i + 2) % 3]));
        let dir = (target - centers[i]).normalized().unwrap_or(Point2::new(1.0, 0.0));
        dir.rotated(seed_deg.to_radians())
    })
}

fn iterate(bodies: [&ConvexBody; 3], dirs: [Point2; 3]) -> Option<([Point2; 3], usize)> {
    let mut x: [Point2; 3] = std::array::from_fn(|i| bodies[i].support_point(dirs[i]));
    let orientation = orient(x[0], x[1], x[2]).signum();
    for it in 1..=MAX_ITERATIONS {
        let mut moved: f64 = 0.0;
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            // Normal of x_j x_k on the side of x_i, for the fixed orientation.
            let d = -((x[k] - x[j]).perp().normalized()? * orientation);
            let next = bodies[i].support_point(d);
            moved = moved.max(next.distance(x[i]));
            x[i] = next;
        }
        if orient(x[0], x[1], x[2]).signum() != orientation {
            return None;
        }
        if moved < MOVE_TOL {
            return Some((x, it));
        }
    }
    Some((x, MAX_ITERATIONS))
}

/// Newton's method on the three support angles, for smooth bodies: the
/// support direction at `x_i` must be normal to `x_j x_k`.
fn newton(bodies: [&ConvexBody; 3], dirs: [Point2; 3]) -> Option<([Point2; 3], usize)> {
    let eval = |phi: &[f64; 3]| -> [f64; 3] {
        let x: [Point2; 3] = std::array::from_fn(|i| bodies[i].support_point(Point2::from_angle(phi[i])));
        std::array::from_fn(|i| Point2::from_angle(phi[i]).dot(x[(i + 2) % 3] - x[(i + 1) % 3]))
    };
    let mut phi: [f64; 3] = dirs.map(|d| d.y.atan2(d.x));
    for it in 1..=NEWTON_STEPS {
        let f = eval(&phi);
        if f.iter().all(|v| v.abs() < 1e-14) {
            let x = std::array::from_fn(|i| bodies[i].support_point(Point2::from_angle(phi[i])));
            return Some((x, it));
        }
        let mut jac = vec![vec![0.0; 3]; 3];
        for c in 0..3 {
            let mut shifted = phi;
            shifted[c] += 1e-7;
            let g = eval(&shifted);
            for r in 0..3 {
                jac[r][c] = (g[r] - f[r]) / 1e-7;
            }
        }
        let step = solve(jac, f.iter().map(|v| -v).collect())?;
        for i in 0..3 {
            phi[i] += step[i].clamp(-0.5, 0.5);
        }
    }
    None
}

/// Where a vertex of the triangle sits on a polygon: at a vertex, or on an
/// edge `a + s (b - a)`, `s` in `[0, 1]`.
#[derive(Clone, Copy)]
struct Feature {
    base: Point2,
    dir: Point2,
}

fn features(vertices: &[Point2]) -> Vec<Feature> {
    let n = vertices.len();
    let corners = vertices.iter().map(|&v| Feature { base: v, dir: Point2::ORIGIN });
    let edges = (0..n).map(|i| Feature { base: vertices[i], dir: vertices[(i + 1) % n] - vertices[i] });
    corners.chain(edges).collect()
}

/// Solves `A s = b` for up to three unknowns; `None` when singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                for c in col..n {
                    a[row][c] -= f * a[col][c];
                }
                b[row] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Exact search for polygons: every assignment of vertices and edges. An
/// edge-placed vertex forces the opposite side parallel to that edge, which
/// is linear in the edge parameters. Valid triangles are tried by
/// decreasing area.
fn feature_search(bodies: [&ConvexBody; 3]) -> Option<[Point2; 3]> {
    let polys: Option<Vec<&[Point2]>> = bodies.iter().map(|b| b.as_polygon().map(|p| p.vertices())).collect();
    let feats: Vec<Vec<Feature>> = polys?.iter().map(|v| features(v)).collect();
    let mut found: Vec<([Point2; 3], f64)> = Vec::new();
    for &f0 in &feats[0] {
        for &f1 in &feats[1] {
            for &f2 in &feats[2] {
                let f = [f0, f1, f2];
                let on_edge: Vec<usize> = (0..3).filter(|&i| f[i].dir != Point2::ORIGIN).collect();
                let mut s = [0.0; 3];
                if !on_edge.is_empty() {
                    let col = |i: usize| on_edge.iter().position(|&e| e == i);
                    let mut a = vec![vec![0.0; on_edge.len()]; on_edge.len()];
                    let mut b = vec![0.0; on_edge.len()];
                    for (row, &i) in on_edge.iter().enumerate() {
                        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                        let e = f[i].dir;
                        // cross(x_k - x_j, e) = 0
                        b[row] = -(f[k].base - f[j].base).cross(e);
                        if let Some(c) = col(k) {
                            a[row][c] += f[k].dir.cross(e);
                        }
                        if let Some(c) = col(j) {
                            a[row][c] -= f[j].dir.cross(e);
                        }
                    }
                    let Some(sol) = solve(a, b) else { continue };
                    if sol.iter().any(|&v| !(-1e-9..=1.0 + 1e-9).contains(&v)) {
                        continue;
                    }
                    for (&i, v) in on_edge.iter().zip(sol) {
                        s[i] = v.clamp(0.0, 1.0);
                    }
                }
                let x = [0, 1, 2].map(|i| f[i].base + f[i].dir * s[i]);
                let area = triangle_area(x[0], x[1], x[2]).abs();
                if area <= MIN_AREA {
                    continue;
                }
                if support_gaps(bodies, x).is_some_and(|g| g.iter().all(|&v| v.abs() < SUPPORT_GAP)) {
                    found.push((x, area));
                }
            }
        }
    }
    found.sort_by(|p, q| q.1.total_cmp(&p.1));
    found.into_iter().map(|(x, _)| x).find(|&x| verify_hole_triangle(bodies, x))
}

/// The hole triangle of three pairwise-meeting bodies with no common point,
/// by support-point iteration with an exact feature search for polygons.
pub fn hole_triangle(bodies: [&ConvexBody; 3]) -> Result<HoleTriangle, FourColorError> {
    if !intersect_all(&bodies.map(|b| b.clone()))?.is_empty() {
        return Err(FourColorError::NoHoleTriangle);
    }
    let hole = hole_center(bodies);
    let found = |x: [Point2; 3], iterations: usize, fallback: bool| {
        let area = triangle_area(x[0], x[1], x[2]).abs();
        HoleTriangle { vertices: x, area, iterations, fallback }
    };
    for seed in SEED_ANGLES_DEG {
        if let Some((x, iterations)) = iterate(bodies, initial_directions(bodies, hole, seed)) {
            if verify_hole_triangle(bodies, x) {
                return Ok(found(x, iterations, false));
            }
        }
    }
    if bodies.iter().all(|b| b.is_disk()) {
        if let Some((x, steps)) = newton(bodies, initial_directions(bodies, hole, 0.0)) {
            if verify_hole_triangle(bodies, x) {
                return Ok(found(x, MAX_ITERATIONS + steps, true));
            }
        }
    }
    let x = feature_search(bodies).ok_or(FourColorError::IterationDiverged)?;
    Ok(found(x, MAX_ITERATIONS, true))
}

fn sorted_vertices(t: &HoleTriangle) -> [Point2; 3] {
    let mut v = t.vertices;
    v.sort_by(|a, b| a.cmp_xy(b));
    v
}

/// Larger area wins; equal areas go to the lexicographically smaller
/// sorted vertex list.
fn better(a: &RainbowTriple, b: &RainbowTriple) -> bool {
    match a.triangle.area.total_cmp(&b.triangle.area) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            let (va, vb) = (sorted_vertices(&a.triangle), sorted_vertices(&b.triangle));
            va.iter().zip(&vb).map(|(p, q)| p.cmp_xy(q)).find(|o| o.is_ne()).is_some_and(|o| o.is_lt())
        }
    }
}

/// All rainbow triples without a common point, with their hole triangles.
pub fn empty_rainbow_triples(inst: &ColoredInstance) -> Result<Vec<RainbowTriple>, FourColorError> {
    let k = inst.num_families();
    let mut jobs = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for i in 0..inst.families[a].translates.len() {
                    for j in 0..inst.families[b].translates.len() {
                        for l in 0..inst.families[c].translates.len() {
                            jobs.push(([a, b, c], [i, j, l]));
                        }
                    }
                }
            }
        }
    }
    let results: Vec<Result<Option<RainbowTriple>, FourColorError>> = jobs
        .par_iter()
        .map(|&(colors, indices)| {
            let bodies = [0, 1, 2].map(|t| inst.placed(colors[t], indices[t]));
            match hole_triangle([&bodies[0], &bodies[1], &bodies[2]]) {
                Ok(triangle) => Ok(Some(RainbowTriple { colors, indices, triangle })),
                Err(FourColorError::NoHoleTriangle) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    results.into_iter().filter_map(|r| r.transpose()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourColorOutcome {
    pub triple: Option<RainbowTriple>,
    pub certificate: PiercingCertificate,
}

/// Piercing of one of four families by the vertices of the largest hole
/// triangle, or by one common point when every rainbow triple meets.
pub fn four_color_pierce(inst: &ColoredInstance) -> Result<FourColorOutcome, FourColorError> {
    let k = inst.num_families();
    if k != 4 {
        return Err(FourColorError::WrongFamilyCount(k));
    }
    let triples = empty_rainbow_triples(inst)?;
    let best = triples.into_iter().reduce(|acc, t| if better(&t, &acc) { t } else { acc });
    let Some(triple) = best else {
        for m in 0..k {
            let region = intersect_all(&inst.placed_family(m))?;
            if let Some(p) = region.lowest_point() {
                let cert = PiercingCertificate::assign(inst, "four-color", m, vec![p], Scope::Family)?;
                return Ok(FourColorOutcome { triple: None, certificate: cert });
            }
        }
        return Err(FourColorError::HellyFailed);
    };
    let m = (0..4).find(|c| !triple.colors.contains(c)).expect("three of four colors are used");
    let points = triple.triangle.vertices.to_vec();
    for (i, body) in inst.placed_family(m).iter().enumerate() {
        if !points.iter().any(|&p| body.contains(p, CERT_SLACK)) {
            return Err(FourColorError::ClaimViolated(i));
        }
    }
    let cert = PiercingCertificate::assign(inst, "four-color", m, points, Scope::Family)?.pruned();
    Ok(FourColorOutcome { triple: Some(triple), certificate: cert })
}
