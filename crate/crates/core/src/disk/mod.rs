//! Point sets with all cross-set distances at most one: exclude the set of
//! largest diameter and cover the rest by three disks of diameter below one.
//! Applied to centers, this pierces families of diameter-one disks.

mod covers;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::geometry::{convex_hull, ConvexBody, Disk, Point2, CERT_SLACK};
use crate::instance::{
    CertificateFault, ColoredInstance, CoverCertificate, CrossPair, InstanceError, PiercingCertificate,
    PointSetInstance, Scope, TranslateKey,
};

pub use covers::{
    borsuk_three_cover, diameter_disk, lens_cover, lens_cover_three, strip_cover_three, strip_frame, BorsukCover,
    LensCover, LensRegion, StripFrame, StripSide, LENS_ANGLE_DEG, LENS_R0, STRIP_RADIUS,
};

/// Cross-set distance allowance.
pub const CROSS_TOL: f64 = 1e-9;
/// Every cover disk has diameter at most `1 - DIAMETER_MARGIN`.
pub const DIAMETER_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DiskError {
    #[error("points {0:?} of different sets are more than one apart")]
    InvalidInput(CrossPair),
    #[error("points lie both above and below the middle band")]
    RegionConflict,
    #[error("generator is not a disk")]
    NotDisk,
    #[error("need at least two sets, got {0}")]
    TooFewSets(usize),
    #[error("point {0} is not covered")]
    Uncovered(TranslateKey),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Certificate(#[from] CertificateFault),
}

/// Which construction produced the cover, by the excluded set's diameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiskCase {
    /// `2/√3 <= d <= 2`.
    Lens,
    /// `1 < d < 2/√3`.
    Strip(StripSide),
    /// `d <= 1`.
    SmallDiameter,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskOutcome {
    pub case: DiskCase,
    pub diameter: f64,
    /// Ends of a diameter of the excluded set.
    pub axis: (Point2, Point2),
    pub certificate: CoverCertificate,
}

/// Largest pairwise distance and a pair realizing it (first pair on ties).
pub fn diameter_pair(points: &[Point2]) -> (f64, Point2, Point2) {
    let hull = if points.len() > 3 { convex_hull(points) } else { points.to_vec() };
    let hull = if hull.is_empty() { points.to_vec() } else { hull };
    let mut best = (0.0, hull[0], hull[0]);
    for i in 0..hull.len() {
        for j in i + 1..hull.len() {
            let d = hull[i].distance(hull[j]);
            if d > best.0 {
                best = (d, hull[i], hull[j]);
            }
        }
    }
    best
}

fn check_cross_distances(sets: &[Vec<Point2>]) -> Result<(), DiskError> {
    let mut worst: Option<CrossPair> = None;
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            for (i, p) in sets[a].iter().enumerate() {
                for (j, q) in sets[b].iter().enumerate() {
                    let d = p.distance(*q);
                    if d > 1.0 + CROSS_TOL && worst.map_or(true, |w| d > w.distance) {
                        worst = Some(CrossPair { family_a: a, index_a: i, family_b: b, index_b: j, distance: d });
                    }
                }
            }
        }
    }
    worst.map_or(Ok(()), |w| Err(DiskError::InvalidInput(w)))
}

/// Rigid motion putting `x1` at `(-d/2, 0)` and `y1` at `(d/2, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Frame {
    pub origin: Point2,
    pub angle: f64,
}

impl Frame {
    pub fn new(x1: Point2, y1: Point2) -> Self {
        let v = y1 - x1;
        Self { origin: x1.midpoint(y1), angle: v.y.atan2(v.x) }
    }

    pub fn to_local(self, p: Point2) -> Point2 {
        (p - self.origin).rotated(-self.angle)
    }

    pub fn point_to_world(self, p: Point2) -> Point2 {
        p.rotated(self.angle) + self.origin
    }

    pub fn to_world(self, d: Disk) -> Disk {
        Disk { center: self.point_to_world(d.center), radius: d.radius }
    }
}

/// Covers every set except the one of largest diameter (smallest index on
/// ties) by at most three disks of diameter below one.
pub fn disk_pierce(sets: &PointSetInstance) -> Result<DiskOutcome, DiskError> {
    let k = sets.sets.len();
    if k < 2 {
        return Err(DiskError::TooFewSets(k));
    }
    if let Some(f) = sets.sets.iter().position(|s| s.is_empty()) {
        return Err(InstanceError::EmptyFamily(f).into());
    }
    check_cross_distances(&sets.sets)?;
    let diameters: Vec<(f64, Point2, Point2)> = sets.sets.iter().map(|s| diameter_pair(s)).collect();
    let m = (0..k).fold(0, |best, i| if diameters[i].0 > diameters[best].0 { i } else { best });
    let (d, x1, y1) = diameters[m];

    let (case, disks) = if d <= 1.0 {
        let all: Vec<Point2> = sets.sets.iter().flatten().copied().collect();
        (DiskCase::SmallDiameter, borsuk_three_cover(&all).disks)
    } else {
        let frame = Frame::new(x1, y1);
        let local: Vec<Point2> =
            sets.sets.iter().enumerate().filter(|&(j, _)| j != m).flat_map(|(_, s)| s.iter().map(|&p| frame.to_local(p))).collect();
        let (case, disks) = if d >= LENS_R0 {
            (DiskCase::Lens, lens_cover_three(d.min(2.0)))
        } else {
            let (side, disks) = strip_cover_three(&local, strip_frame())?;
            (DiskCase::Strip(side), disks)
        };
        (case, disks.map(|disk| frame.to_world(disk)))
    };

    let mut witnesses = BTreeMap::new();
    for (j, set) in sets.sets.iter().enumerate().filter(|&(j, _)| j != m) {
        for (i, &p) in set.iter().enumerate() {
            let key = TranslateKey { family: Some(j), index: i };
            let hit = [1e-9, CERT_SLACK]
                .iter()
                .find_map(|&slack| disks.iter().position(|c| c.contains(p, slack)))
                .ok_or(DiskError::Uncovered(key))?;
            witnesses.insert(key, hit);
        }
    }
    let certificate = CoverCertificate {
        method: "disk".into(),
        excluded_index: m,
        covers: disks.iter().map(|&c| ConvexBody::Disk(c)).collect(),
        witnesses,
    };
    Ok(DiskOutcome { case, diameter: d, axis: (x1, y1), certificate })
}

/// Disk families read as point sets: centers scaled so the disks have
/// diameter one.
pub fn center_sets(inst: &ColoredInstance) -> Result<(PointSetInstance, f64), DiskError> {
    let ConvexBody::Disk(g) = inst.generator else { return Err(DiskError::NotDisk) };
    let scale = 2.0 * g.radius;
    let sets = inst
        .families
        .iter()
        .map(|f| f.translates.iter().map(|&t| (g.center + t) / scale).collect())
        .collect();
    Ok((PointSetInstance { sets }, scale))
}

/// Piercing of all families but one for a disk instance: cover disk
/// centers pierce every disk whose center they cover.
pub fn disk_pierce_instance(inst: &ColoredInstance) -> Result<(DiskOutcome, PiercingCertificate), DiskError> {
    let (sets, scale) = center_sets(inst)?;
    let outcome = match disk_pierce(&sets) {
        Err(DiskError::InvalidInput(pair)) => {
            // Report the pair in the instance's gauge: centers one apart
            // after scaling are two radii apart.
            return Err(DiskError::InvalidInput(CrossPair { distance: 2.0 * pair.distance, ..pair }));
        }
        other => other?,
    };
    let points = outcome
        .certificate
        .covers
        .iter()
        .map(|c| c.center() * scale)
        .collect();
    let cert = PiercingCertificate::assign(inst, "disk", outcome.certificate.excluded_index, points, Scope::Complement)?;
    Ok((outcome, cert.pruned()))
}

#[cfg(test)]
mod tests;
