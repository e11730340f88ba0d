use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_preconditions, SymmetricError};
use crate::geometry::{ConvexBody, Gauge, Point2};
use crate::instance::{ColoredInstance, PiercingCertificate, Scope};

/// Start grid is `JUNG_GRID x JUNG_GRID` direction pairs.
const JUNG_GRID: usize = 24;
pub const JUNG_STARTS: usize = JUNG_GRID * JUNG_GRID;
/// Best starts that get local refinement.
pub const JUNG_REFINED_STARTS: usize = 16;
const MAX_REFINE_STEPS: usize = 10_000;
const MIN_STEP: f64 = 1e-6;

/// Largest gauge circumradius found over triangles of gauge diameter 2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JungData {
    pub j: f64,
    pub witness: [Point2; 3],
    pub starts: usize,
    pub refined_starts: usize,
    pub refinement_steps: usize,
}

/// Parameters `(theta_u, theta_v, s_u, s_v)` of the triangle
/// `{0, 2 s_u b(theta_u), 2 s_v b(theta_v)}` with `b` the unit boundary point.
type Params = [f64; 4];

fn triangle(g: &Gauge, x: &Params) -> [Point2; 3] {
    let u = g.boundary_point(Point2::from_angle(x[0])) * (2.0 * x[2]);
    let v = g.boundary_point(Point2::from_angle(x[1])) * (2.0 * x[3]);
    [Point2::ORIGIN, u, v]
}

fn value(g: &Gauge, x: &Params) -> Option<f64> {
    if !(0.0..=1.0).contains(&x[2]) || !(0.0..=1.0).contains(&x[3]) {
        return None;
    }
    let t = triangle(g, x);
    if g.distance(t[1], t[2]) > 2.0 + 1e-12 {
        return None;
    }
    Some(g.enclosing_ball(&t).1)
}

/// Start with both points on the radius-2 sphere, shortening the second
/// until the pair is within distance 2.
fn start(g: &Gauge, i: usize, j: usize) -> (Params, f64) {
    let (a, b) = (TAU * i as f64 / JUNG_GRID as f64, TAU * j as f64 / JUNG_GRID as f64);
    let mut x = [a, b, 1.0, 1.0];
    if value(g, &x).is_none() {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            x[3] = mid;
            if value(g, &x).is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        x[3] = lo;
    }
    let v = value(g, &x).unwrap_or(0.0);
    (x, v)
}

fn refine(g: &Gauge, mut x: Params, mut best: f64) -> (Params, f64, usize) {
    let mut step = [TAU / JUNG_GRID as f64 / 2.0, TAU / JUNG_GRID as f64 / 2.0, 0.05, 0.05];
    let mut evaluations = 0;
    while step[0] >= MIN_STEP && evaluations < MAX_REFINE_STEPS {
        let mut improved = false;
        for c in 0..4 {
            for sign in [1.0, -1.0] {
                let mut y = x;
                y[c] += sign * step[c];
                evaluations += 1;
                if let Some(v) = value(g, &y) {
                    if v > best + 1e-15 {
                        x = y;
                        best = v;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    (x, best, evaluations)
}

/// Multi-start search for the Jung radius of `g`: a fixed grid of start
/// direction pairs, then coordinate refinement of the best starts.
pub fn jung_radius(g: &Gauge) -> JungData {
    let mut starts: Vec<(usize, Params, f64)> = (0..JUNG_STARTS)
        .into_par_iter()
        .map(|s| {
            let (x, v) = start(g, s / JUNG_GRID, s % JUNG_GRID);
            (s, x, v)
        })
        .collect();
    starts.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    starts.truncate(JUNG_REFINED_STARTS);
    let refined: Vec<(usize, Params, f64, usize)> = starts
        .into_par_iter()
        .map(|(s, x, v)| {
            let (x, v, n) = refine(g, x, v);
            (s, x, v, n)
        })
        .collect();
    let steps = refined.iter().map(|r| r.3).sum();
    let best = refined
        .iter()
        .max_by(|a, b| a.2.total_cmp(&b.2).then(b.0.cmp(&a.0)))
        .expect("some start");
    JungData {
        j: best.2,
        witness: triangle(g, &best.1),
        starts: JUNG_STARTS,
        refined_starts: JUNG_REFINED_STARTS,
        refinement_steps: steps,
    }
}

const COVER_ANGLES: usize = 720;
const COVER_SLACK: f64 = 1e-9;

/// Sample points of the radius-`j` ball: boundary samples, polygon
/// vertices and a few shrunken copies of the boundary.
fn ball_samples(g: &Gauge, j: f64) -> Vec<Point2> {
    let mut out: Vec<Point2> = (0..COVER_ANGLES)
        .map(|i| g.boundary_point(Point2::from_angle(TAU * i as f64 / COVER_ANGLES as f64)) * j)
        .collect();
    if let ConvexBody::Polygon(p) = g.unit_ball() {
        out.extend(p.vertices().iter().map(|&v| v * j));
    }
    let boundary = out.clone();
    for s in [0.75, 0.5, 0.25] {
        out.extend(boundary.iter().step_by(8).map(|&p| p * s));
    }
    out.push(Point2::ORIGIN);
    out
}

/// Angle after `from` (counter-clockwise) whose radius-`j` boundary point
/// is at distance 2 from `x`. Polygon gauges can stay at distance exactly 2
/// along an edge; `last` selects the far end of such a plateau.
fn next_at_distance_two(g: &Gauge, j: f64, x: Point2, from: f64, last: bool) -> Option<f64> {
    let at = |phi: f64| g.distance(x, g.boundary_point(Point2::from_angle(phi)) * j);
    let beyond = |phi: f64| if last { at(phi) > 2.0 + 1e-12 } else { at(phi) >= 2.0 };
    let step = TAU / COVER_ANGLES as f64;
    let mut lo = from;
    for i in 1..=COVER_ANGLES {
        let hi = from + step * i as f64;
        if beyond(hi) {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                if beyond(mid) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Some(a);
        }
        lo = hi;
    }
    None
}

/// Centers of three unit balls covering the ball of radius `j` about the
/// origin. Boundary points `x1, x2, x3` are chosen with two consecutive
/// pairs at distance 2; the covering balls are the balls on the segments
/// between them.
pub fn jung_cover_three(g: &Gauge, j: f64) -> Result<[Point2; 3], SymmetricError> {
    if j <= 1.0 + COVER_SLACK {
        return Ok([Point2::ORIGIN; 3]);
    }
    let samples = ball_samples(g, j);
    let covered = |centers: &[Point2; 3]| {
        samples.iter().all(|&s| centers.iter().any(|&c| g.distance(c, s) <= 1.0 + COVER_SLACK))
    };
    for (i, last) in (0..COVER_ANGLES).flat_map(|i| [(i, false), (i, true)]) {
        let theta = TAU * i as f64 / COVER_ANGLES as f64;
        let x1 = g.boundary_point(Point2::from_angle(theta)) * j;
        let Some(phi2) = next_at_distance_two(g, j, x1, theta, last) else { continue };
        let x2 = g.boundary_point(Point2::from_angle(phi2)) * j;
        let Some(phi3) = next_at_distance_two(g, j, x2, phi2, last) else { continue };
        if phi3 >= theta + TAU {
            continue;
        }
        let x3 = g.boundary_point(Point2::from_angle(phi3)) * j;
        if g.distance(x3, x1) > 2.0 + COVER_SLACK {
            continue;
        }
        let centers = [x1.midpoint(x2), x2.midpoint(x3), x3.midpoint(x1)];
        if covered(&centers) {
            return Ok(centers);
        }
    }
    Err(SymmetricError::CoverNotVerified(j))
}

/// Finds the family with the smallest enclosing ball. Colorful Helly
/// applied to Jung balls bounds that radius by the Jung radius, so three
/// unit balls cover it; their centers pierce the family.
pub fn colorful_jung_pierce(inst: &ColoredInstance) -> Result<PiercingCertificate, SymmetricError> {
    let (gauge, offset) = check_preconditions(inst)?;
    let (m, (center, radius)) = (0..inst.num_families())
        .map(|f| {
            let centers: Vec<Point2> = inst.families[f].translates.iter().map(|&t| t + offset).collect();
            (f, gauge.enclosing_ball(&centers))
        })
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(a.0.cmp(&b.0)))
        .expect("families exist");
    let points = match jung_cover_three(&gauge, radius) {
        Ok(cover) if radius <= 1.0 + COVER_SLACK => vec![center + cover[0]],
        Ok(cover) => cover.iter().map(|&c| c + center).collect(),
        Err(_) => return Err(SymmetricError::NoFamilyCovered(radius)),
    };
    let cert = PiercingCertificate::assign(inst, "jung", m, points, Scope::Family)?;
    Ok(cert.pruned())
}
