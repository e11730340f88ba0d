//! Colored families of translates, the piercing/covering restatement,
//! certificates and seeded instance generation.

mod certificate;
mod generate;

use serde::{Deserialize, Serialize};

use crate::geometry::{difference_gauge, intersect, ConvexBody, Gauge, GeometryError, Point2, EPS};

pub use certificate::{
    check_certificate, check_cover_certificate, verify_cover, verify_piercing, Certificate, CertificateFault,
    CoverCertificate, PiercingCertificate, Scope, TranslateKey,
};
pub use generate::{generate_instance, random_body, BodyKind, GenSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("an instance needs at least two families, got {0}")]
    TooFewFamilies(usize),
    #[error("family {0} is empty")]
    EmptyFamily(usize),
    #[error("color {0} is used by more than one family")]
    DuplicateColor(u32),
    #[error("translate {index} of family {family} is not finite")]
    NonFinite { family: usize, index: usize },
    #[error("invalid generator: {0}")]
    Geometry(#[from] GeometryError),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("gauge test and direct intersection disagree on {0:?}")]
    Disagreement(CrossPair),
    #[error("instance generation exhausted its retry budget")]
    GenerationExhausted,
}

/// One color class: translation vectors of the generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub color: u32,
    pub translates: Vec<Point2>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColoredInstance {
    pub generator: ConvexBody,
    pub families: Vec<Family>,
}

#[derive(Deserialize)]
struct InstanceRepr {
    generator: ConvexBody,
    families: Vec<Family>,
}

impl<'de> Deserialize<'de> for ColoredInstance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = InstanceRepr::deserialize(deserializer)?;
        ColoredInstance::new(repr.generator, repr.families).map_err(serde::de::Error::custom)
    }
}

impl ColoredInstance {
    pub fn new(generator: ConvexBody, families: Vec<Family>) -> Result<Self, InstanceError> {
        if families.len() < 2 {
            return Err(InstanceError::TooFewFamilies(families.len()));
        }
        for (f, fam) in families.iter().enumerate() {
            if fam.translates.is_empty() {
                return Err(InstanceError::EmptyFamily(f));
            }
            if let Some(index) = fam.translates.iter().position(|t| !t.is_finite()) {
                return Err(InstanceError::NonFinite { family: f, index });
            }
            if families[..f].iter().any(|g| g.color == fam.color) {
                return Err(InstanceError::DuplicateColor(fam.color));
            }
        }
        if let Some(p) = generator.as_polygon() {
            if p.is_point() {
                return Err(GeometryError::Degenerate.into());
            }
        }
        Ok(Self { generator, families })
    }

    /// Convenience constructor assigning colors `1..=k` in order.
    pub fn from_translates(generator: ConvexBody, families: Vec<Vec<Point2>>) -> Result<Self, InstanceError> {
        let families = families
            .into_iter()
            .enumerate()
            .map(|(i, translates)| Family { color: i as u32 + 1, translates })
            .collect();
        Self::new(generator, families)
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances serialize")
    }

    pub fn num_families(&self) -> usize {
        self.families.len()
    }

    /// The translate `K + t` for translate `index` of family `family`.
    pub fn placed(&self, family: usize, index: usize) -> ConvexBody {
        self.generator.translate(self.families[family].translates[index])
    }

    pub fn placed_family(&self, family: usize) -> Vec<ConvexBody> {
        self.families[family].translates.iter().map(|&t| self.generator.translate(t)).collect()
    }

    pub fn gauge(&self) -> Gauge {
        difference_gauge(&self.generator)
    }

    /// All cross-color translate pairs `((f, i), (g, j))` with `f < g`.
    pub fn cross_pairs(&self) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
        let k = self.families.len();
        (0..k).flat_map(move |f| {
            (f + 1..k).flat_map(move |g| {
                (0..self.families[f].translates.len()).flat_map(move |i| {
                    (0..self.families[g].translates.len()).map(move |j| ((f, i), (g, j)))
                })
            })
        })
    }
}

/// A cross-color pair of translates with its gauge distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossPair {
    pub family_a: usize,
    pub index_a: usize,
    pub family_b: usize,
    pub index_b: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossReport {
    pub ok: bool,
    /// Worst violating pair, if any.
    pub violating: Option<CrossPair>,
    pub pairs_checked: usize,
    pub pairs_cross_checked: usize,
}

const MAX_CROSS_CHECKS: usize = 1000;

/// Checks that every two translates of different colors meet. Same-color
/// pairs are never constrained.
pub fn validate_cross_intersecting(inst: &ColoredInstance) -> Result<CrossReport, InstanceError> {
    let gauge = inst.gauge();
    let pairs: Vec<_> = inst.cross_pairs().collect();
    let mut worst: Option<CrossPair> = None;
    for &((f, i), (g, j)) in &pairs {
        let d = gauge.distance(inst.families[f].translates[i], inst.families[g].translates[j]);
        if d > 2.0 + EPS && worst.map_or(true, |w| d > w.distance) {
            worst = Some(CrossPair { family_a: f, index_a: i, family_b: g, index_b: j, distance: d });
        }
    }

    // Cross-check the gauge route against direct intersection on a strided sample.
    let stride = pairs.len().div_ceil(MAX_CROSS_CHECKS).max(1);
    let mut cross_checked = 0;
    for &((f, i), (g, j)) in pairs.iter().step_by(stride) {
        let d = gauge.distance(inst.families[f].translates[i], inst.families[g].translates[j]);
        cross_checked += 1;
        if (d - 2.0).abs() <= 1e-7 {
            continue;
        }
        let meet = !intersect(&inst.placed(f, i), &inst.placed(g, j))?.is_empty();
        if meet != (d <= 2.0) {
            return Err(InstanceError::Disagreement(CrossPair {
                family_a: f,
                index_a: i,
                family_b: g,
                index_b: j,
                distance: d,
            }));
        }
    }
    Ok(CrossReport { ok: worst.is_none(), violating: worst, pairs_checked: pairs.len(), pairs_cross_checked: cross_checked })
}

/// One color class of points in the covering formulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub color: u32,
    pub points: Vec<Point2>,
}

/// The covering restatement: cover some `X_m` by translates of `-K`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringInstance {
    pub cover_body: ConvexBody,
    pub point_sets: Vec<PointSet>,
    pub gauge: Gauge,
}

/// Translates `t` become points `t`; the covering body is `-K`. A point
/// `c` pierces `K + t` exactly when `t` lies in `-K + c`.
pub fn to_covering(inst: &ColoredInstance) -> CoveringInstance {
    CoveringInstance {
        cover_body: inst.generator.reflect(),
        point_sets: inst
            .families
            .iter()
            .map(|f| PointSet { color: f.color, points: f.translates.clone() })
            .collect(),
        gauge: inst.gauge(),
    }
}

/// The inverse of [`to_covering`]: points become translates of `-cover_body`.
pub fn from_covering(cov: &CoveringInstance) -> Result<ColoredInstance, InstanceError> {
    let families = cov
        .point_sets
        .iter()
        .map(|s| Family { color: s.color, translates: s.points.clone() })
        .collect();
    ColoredInstance::new(cov.cover_body.reflect(), families)
}

/// Plain point sets, `{"sets": [[[x, y], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetInstance {
    pub sets: Vec<Vec<Point2>>,
}

impl PointSetInstance {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let inst: PointSetInstance = serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
        if inst.sets.len() < 2 {
            return Err(InstanceError::TooFewFamilies(inst.sets.len()));
        }
        if let Some(f) = inst.sets.iter().position(|s| s.is_empty()) {
            return Err(InstanceError::EmptyFamily(f));
        }
        Ok(inst)
    }
}
