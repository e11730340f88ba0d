//! Method selection and a uniform entry point over all piercers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::disk::{disk_pierce_instance, DiskError};
use crate::four_color::{four_color_pierce, FourColorError};
use crate::geometry::{ConvexBody, Gauge, CERT_SLACK};
use crate::instance::{validate_cross_intersecting, verify_piercing, ColoredInstance, CrossPair, PiercingCertificate};
use crate::symmetric::{colorful_jung_pierce, symmetric_pierce, SymmetricError};
use crate::triangle::{triangle_pierce, TriangleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    Symmetric,
    Jung,
    Triangle,
    Disk,
    FourColor,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::Auto, Method::Symmetric, Method::Jung, Method::Triangle, Method::Disk, Method::FourColor];

    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Symmetric => "symmetric",
            Method::Jung => "jung",
            Method::Triangle => "triangle",
            Method::Disk => "disk",
            Method::FourColor => "four-color",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}; expected one of auto, symmetric, jung, triangle, disk, four-color"))
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PierceError {
    /// The method's preconditions on the generator or color count fail.
    #[error("method {method} does not apply: {reason}")]
    Incompatible { method: Method, reason: String },
    /// Two translates of different colors are disjoint.
    #[error("translates {}#{} and {}#{} of different colors do not meet (distance {:.9} > 2)", .0.family_a, .0.index_a, .0.family_b, .0.index_b, .0.distance)]
    InvalidInstance(CrossPair),
    /// A construction failed on a valid instance.
    #[error("construction failed on a valid instance: {0}")]
    Internal(String),
}

/// Coarse shape class of a generator, as used for dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorClass {
    Disk,
    Triangle,
    Symmetric,
    Other,
}

pub fn classify(generator: &ConvexBody) -> GeneratorClass {
    match generator {
        ConvexBody::Disk(_) => GeneratorClass::Disk,
        ConvexBody::Polygon(p) if p.len() == 3 => GeneratorClass::Triangle,
        ConvexBody::Polygon(_) => {
            if Gauge::new(generator.translate(-generator.center())).is_ok() {
                GeneratorClass::Symmetric
            } else {
                GeneratorClass::Other
            }
        }
    }
}

/// The concrete method `method` stands for on `inst`, after checking that
/// it applies. `Auto` tries disk, triangle, symmetric and four-color in
/// that order.
pub fn resolve_method(inst: &ColoredInstance, method: Method) -> Result<Method, PierceError> {
    let class = classify(&inst.generator);
    let k = inst.num_families();
    let symmetric = matches!(class, GeneratorClass::Symmetric | GeneratorClass::Disk);
    let check = |ok: bool, reason: &str| {
        if ok {
            Ok(method)
        } else {
            Err(PierceError::Incompatible { method, reason: reason.to_string() })
        }
    };
    match method {
        Method::Auto => {
            if class == GeneratorClass::Disk {
                Ok(Method::Disk)
            } else if class == GeneratorClass::Triangle && k >= 3 {
                Ok(Method::Triangle)
            } else if symmetric && k >= 3 {
                Ok(Method::Symmetric)
            } else if k == 4 {
                Ok(Method::FourColor)
            } else {
                Err(PierceError::Incompatible {
                    method,
                    reason: format!("no construction covers this generator with {k} colors"),
                })
            }
        }
        Method::Symmetric | Method::Jung => {
            check(symmetric, "generator is not centrally symmetric")?;
            check(k >= 3, "needs at least three colors")
        }
        Method::Triangle => {
            check(class == GeneratorClass::Triangle, "generator is not a triangle")?;
            check(k >= 3, "needs at least three colors")
        }
        Method::Disk => check(class == GeneratorClass::Disk, "generator is not a disk"),
        Method::FourColor => check(k == 4, "needs exactly four colors"),
    }
}

fn internal(e: impl fmt::Display) -> PierceError {
    PierceError::Internal(e.to_string())
}

fn run(inst: &ColoredInstance, method: Method) -> Result<PiercingCertificate, PierceError> {
    match method {
        Method::Symmetric | Method::Jung => {
            let out = if method == Method::Symmetric { symmetric_pierce(inst) } else { colorful_jung_pierce(inst) };
            out.map_err(|e| match e {
                SymmetricError::NotCrossIntersecting(pair) => PierceError::InvalidInstance(pair),
                other => internal(other),
            })
        }
        Method::Triangle => triangle_pierce(inst).map_err(|e| match e {
            TriangleError::InvalidInstance(pair) => PierceError::InvalidInstance(pair),
            other => internal(other),
        }),
        Method::Disk => disk_pierce_instance(inst).map(|(_, cert)| cert).map_err(|e| match e {
            DiskError::InvalidInput(pair) => PierceError::InvalidInstance(pair),
            other => internal(other),
        }),
        Method::FourColor => four_color_pierce(inst).map(|out| out.certificate).map_err(|e: FourColorError| internal(e)),
        Method::Auto => unreachable!("resolved before running"),
    }
}

/// Validates the instance, runs the selected construction and checks the
/// certificate it returns.
pub fn pierce(inst: &ColoredInstance, method: Method) -> Result<PiercingCertificate, PierceError> {
    let method = resolve_method(inst, method)?;
    let report = validate_cross_intersecting(inst).map_err(internal)?;
    if let Some(pair) = report.violating {
        return Err(PierceError::InvalidInstance(pair));
    }
    let cert = run(inst, method)?;
    verify_piercing(inst, &cert, CERT_SLACK).map_err(|f| internal(format!("{method} certificate rejected: {f}")))?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, BodyKind, GenSpec};
    use crate::Point2;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("circle".parse::<Method>().is_err());
    }

    #[test]
    fn auto_follows_the_generator() {
        let cases = [
            (BodyKind::Disk, 3, Method::Disk),
            (BodyKind::Disk, 2, Method::Disk),
            (BodyKind::Triangle, 3, Method::Triangle),
            (BodyKind::RandomSymmetric, 3, Method::Symmetric),
            (BodyKind::RegularPolygon(5), 4, Method::FourColor),
        ];
        for (kind, k, want) in cases {
            let inst = generate_instance(3, &GenSpec::uniform(kind, k, 3, 1.5)).unwrap();
            assert_eq!(resolve_method(&inst, Method::Auto).unwrap(), want, "{kind:?}");
            assert!(pierce(&inst, Method::Auto).is_ok());
        }
    }

    #[test]
    fn incompatible_methods_are_rejected() {
        let inst = generate_instance(3, &GenSpec::uniform(BodyKind::Triangle, 3, 2, 1.0)).unwrap();
        assert!(matches!(pierce(&inst, Method::Disk), Err(PierceError::Incompatible { .. })));
        assert!(matches!(pierce(&inst, Method::Symmetric), Err(PierceError::Incompatible { .. })));
        assert!(matches!(pierce(&inst, Method::FourColor), Err(PierceError::Incompatible { .. })));
        let two = generate_instance(3, &GenSpec::uniform(BodyKind::RegularPolygon(5), 2, 2, 1.0)).unwrap();
        assert!(matches!(pierce(&two, Method::Auto), Err(PierceError::Incompatible { .. })));
    }

    #[test]
    fn broken_cross_pair_reports_the_witness() {
        let tri = ConvexBody::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 0.8)]).unwrap();
        let inst = ColoredInstance::from_translates(
            tri,
            vec![vec![Point2::new(0.0, 0.0)], vec![Point2::new(5.0, 0.0)], vec![Point2::new(0.2, 0.1)]],
        )
        .unwrap();
        match pierce(&inst, Method::Auto) {
            Err(PierceError::InvalidInstance(pair)) => {
                assert_eq!((pair.family_a, pair.family_b), (0, 1));
                assert!(pair.distance > 2.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symmetric_and_jung_both_verify() {
        let inst = generate_instance(11, &GenSpec::uniform(BodyKind::RandomSymmetric, 3, 4, 1.8)).unwrap();
        for m in [Method::Symmetric, Method::Jung] {
            let cert = pierce(&inst, m).unwrap();
            assert_eq!(cert.method, m.name());
        }
    }
}
