//! Three-point piercing for centrally symmetric bodies, by the
//! highest-lowest-point construction and by the Jung-ball route.

mod jung;

use serde::Serialize;

use crate::geometry::{boundary_crossings, intersect, lowest_point_of, orient, ConvexBody, Gauge, GeometryError, Point2, CERT_SLACK, EPS};
use crate::instance::{
    validate_cross_intersecting, CertificateFault, ColoredInstance, CrossPair, InstanceError, PiercingCertificate,
    Scope,
};

pub use jung::{colorful_jung_pierce, jung_cover_three, jung_radius, JungData, JUNG_REFINED_STARTS, JUNG_STARTS};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SymmetricError {
    #[error("generator is not centrally symmetric")]
    NotSymmetric,
    #[error("need at least three families, got {0}")]
    TooFewFamilies(usize),
    #[error("translates {0:?} of different colors do not meet")]
    NotCrossIntersecting(CrossPair),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("geometry failure: {0}")]
    Geometry(#[from] GeometryError),
    #[error("translate {0} of the chosen family is missed by every point")]
    Uncovered(usize),
    #[error("three unit balls covering the radius-{0} ball were not found")]
    CoverNotVerified(f64),
    #[error("no family fits in a Jung ball (smallest radius {0})")]
    NoFamilyCovered(f64),
}

impl From<CertificateFault> for SymmetricError {
    fn from(f: CertificateFault) -> Self {
        match f {
            CertificateFault::Uncovered(key) => SymmetricError::Uncovered(key.index),
            other => SymmetricError::Instance(InstanceError::Json(other.to_string())),
        }
    }
}

/// The generator moved so its center of symmetry is the origin, read as a
/// gauge, plus the offset from translation vectors to centers.
pub fn centered_gauge(generator: &ConvexBody) -> Result<(Gauge, Point2), SymmetricError> {
    let c = generator.center();
    match Gauge::new(generator.translate(-c)) {
        Ok(g) => Ok((g, c)),
        Err(GeometryError::NotSymmetric) => Err(SymmetricError::NotSymmetric),
        Err(e) => Err(e.into()),
    }
}

pub(crate) fn check_preconditions(inst: &ColoredInstance) -> Result<(Gauge, Point2), SymmetricError> {
    let centered = centered_gauge(&inst.generator)?;
    if inst.num_families() < 3 {
        return Err(SymmetricError::TooFewFamilies(inst.num_families()));
    }
    let report = validate_cross_intersecting(inst)?;
    if let Some(pair) = report.violating {
        return Err(SymmetricError::NotCrossIntersecting(pair));
    }
    Ok(centered)
}

/// The cross-color pair whose intersection has the highest lowest point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BestPair {
    pub family_a: usize,
    pub index_a: usize,
    pub family_b: usize,
    pub index_b: usize,
    /// Lowest point of the intersection of the two translates.
    pub p: Point2,
}

/// Lowest points compare by `y`, then `x`, each within `EPS`; remaining
/// ties keep the earliest pair.
fn higher(p: Point2, than: Point2) -> bool {
    if (p.y - than.y).abs() > EPS {
        return p.y > than.y;
    }
    p.x > than.x + EPS
}

pub fn best_cross_pair(inst: &ColoredInstance) -> Result<BestPair, SymmetricError> {
    let mut best: Option<BestPair> = None;
    for ((fa, ia), (fb, ib)) in inst.cross_pairs() {
        let Some(p) = intersect(&inst.placed(fa, ia), &inst.placed(fb, ib))?.lowest_point() else {
            continue;
        };
        if best.map_or(true, |b| higher(p, b.p)) {
            best = Some(BestPair { family_a: fa, index_a: ia, family_b: fb, index_b: ib, p });
        }
    }
    best.ok_or_else(|| {
        let ((fa, ia), (fb, ib)) = inst.cross_pairs().next().expect("at least two families");
        let d = inst.gauge().distance(inst.families[fa].translates[ia], inst.families[fb].translates[ib]);
        SymmetricError::NotCrossIntersecting(CrossPair { family_a: fa, index_a: ia, family_b: fb, index_b: ib, distance: d })
    })
}

/// Every quantity of the construction, in absolute coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricConstruction {
    pub pair: BestPair,
    pub x1: Point2,
    pub x2: Point2,
    pub p: Point2,
    /// Lowest crossing of the boundaries of `x1 + 2K` and `x2 + 2K`.
    pub q: Point2,
    /// Opposite ends of the diameters of `p + K` through `x1`, `x2`.
    pub y1: Point2,
    pub y2: Point2,
    /// Centers of the translates having `[x1, q]` and `[x2, q]` as diameters.
    pub r1: Point2,
    pub r2: Point2,
    /// Family pierced by `{p, r1, r2}`.
    pub m: usize,
}

pub fn symmetric_construction(inst: &ColoredInstance) -> Result<SymmetricConstruction, SymmetricError> {
    let (gauge, offset) = check_preconditions(inst)?;
    let pair = best_cross_pair(inst)?;
    let x1 = inst.families[pair.family_a].translates[pair.index_a] + offset;
    let x2 = inst.families[pair.family_b].translates[pair.index_b] + offset;
    let scale = gauge.unit_ball().radius_bound();
    let coincident = gauge.lowest_point() * 2.0 + x1;
    let q = if x1.distance(x2) <= EPS * scale {
        coincident
    } else {
        let crossings = boundary_crossings(&gauge.ball(x1, 2.0), &gauge.ball(x2, 2.0))?;
        // The crossing on the same side of line x1 x2 as p; when p is on
        // the line, the lowest one.
        let side = orient(x1, x2, pair.p);
        let tol = EPS * scale * x1.distance(x2);
        let same_side: Vec<Point2> = if side.abs() > tol {
            crossings.iter().copied().filter(|&c| orient(x1, x2, c) * side > 0.0).collect()
        } else {
            crossings.clone()
        };
        lowest_point_of(&same_side).or_else(|| lowest_point_of(&crossings)).unwrap_or(coincident)
    };
    let m = (0..inst.num_families())
        .find(|&f| f != pair.family_a && f != pair.family_b)
        .expect("three or more families");
    Ok(SymmetricConstruction {
        pair,
        x1,
        x2,
        p: pair.p,
        q,
        y1: pair.p * 2.0 - x1,
        y2: pair.p * 2.0 - x2,
        r1: x1.midpoint(q),
        r2: x2.midpoint(q),
        m,
    })
}

/// Translates of the chosen family that neither contain `p` nor have their
/// center in the translates around `r1`, `r2`.
pub fn claim_violations(inst: &ColoredInstance, c: &SymmetricConstruction) -> Result<Vec<usize>, SymmetricError> {
    let (gauge, offset) = centered_gauge(&inst.generator)?;
    Ok(inst.families[c.m]
        .translates
        .iter()
        .enumerate()
        .filter(|&(i, &t)| {
            let x3 = t + offset;
            !inst.placed(c.m, i).contains(c.p, CERT_SLACK)
                && gauge.distance(x3, c.r1) > 1.0 + CERT_SLACK
                && gauge.distance(x3, c.r2) > 1.0 + CERT_SLACK
        })
        .map(|(i, _)| i)
        .collect())
}

/// Pierces the family not in the best cross pair with `{p, r1, r2}`.
pub fn symmetric_pierce(inst: &ColoredInstance) -> Result<PiercingCertificate, SymmetricError> {
    let c = symmetric_construction(inst)?;
    let cert = PiercingCertificate::assign(inst, "symmetric", c.m, vec![c.p, c.r1, c.r2], Scope::Family)?;
    Ok(cert.pruned())
}

#[cfg(test)]
mod tests;
