//! Machine-checkable witnesses for piercing and covering claims.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ColoredInstance, PointSetInstance};
use crate::geometry::{ConvexBody, Point2, CERT_SLACK};

/// Maximum number of points (or covers) any certificate may use.
pub const MAX_POINTS: usize = 3;

/// Identifies one translate: `"i"` within the certified family, or
/// `"j:i"` for translate `i` of family `j` when a union of families is
/// certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TranslateKey {
    pub family: Option<usize>,
    pub index: usize,
}

impl fmt::Display for TranslateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Some(fam) => write!(f, "{fam}:{}", self.index),
            None => write!(f, "{}", self.index),
        }
    }
}

impl FromStr for TranslateKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad witness key {s:?}: {e}"));
        match s.split_once(':') {
            Some((fam, idx)) => Ok(TranslateKey { family: Some(parse(fam)?), index: parse(idx)? }),
            None => Ok(TranslateKey { family: None, index: parse(s)? }),
        }
    }
}

impl Serialize for TranslateKey {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TranslateKey {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What a certificate claims to pierce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// The single family `family_index`.
    Family,
    /// Every family except `family_index`.
    Complement,
}

/// Up to three points piercing a family (or the union of all families but
/// one, for the disk construction).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiercingCertificate {
    pub method: String,
    pub family_index: usize,
    pub points: Vec<Point2>,
    pub witnesses: BTreeMap<TranslateKey, usize>,
}

/// Up to three placed bodies covering the union of all point sets except
/// `excluded_index`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub method: String,
    pub excluded_index: usize,
    pub covers: Vec<ConvexBody>,
    pub witnesses: BTreeMap<TranslateKey, usize>,
}

/// Either certificate kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Piercing(PiercingCertificate),
    Cover(CoverCertificate),
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CertificateFault {
    #[error("certificate uses {0} points, at most 3 allowed")]
    TooManyPoints(usize),
    #[error("family index {0} out of range")]
    FamilyOutOfRange(usize),
    #[error("translate {0} has no witness")]
    MissingWitness(TranslateKey),
    #[error("witness key {0} does not name a certified translate")]
    UnexpectedWitness(TranslateKey),
    #[error("witness of {key} refers to point {point}, which does not exist")]
    PointOutOfRange { key: TranslateKey, point: usize },
    #[error("translate {key} does not contain its witness point {point}")]
    NotContained { key: TranslateKey, point: usize },
    #[error("translate {0} is missed by every certificate point")]
    Uncovered(TranslateKey),
}

impl PiercingCertificate {
    pub fn scope(&self) -> Scope {
        if self.method == "disk" {
            Scope::Complement
        } else {
            Scope::Family
        }
    }

    /// Builds a certificate by assigning each certified translate the first
    /// point that lies in it.
    pub fn assign(
        inst: &ColoredInstance,
        method: &str,
        family_index: usize,
        points: Vec<Point2>,
        scope: Scope,
    ) -> Result<Self, CertificateFault> {
        let mut witnesses = BTreeMap::new();
        for key in certified_keys(inst, family_index, scope)? {
            let body = body_for(inst, family_index, key);
            let pick = points
                .iter()
                .position(|&p| body.contains(p, 1e-9))
                .or_else(|| points.iter().position(|&p| body.contains(p, CERT_SLACK)))
                .ok_or(CertificateFault::Uncovered(key))?;
            witnesses.insert(key, pick);
        }
        Ok(Self { method: method.to_string(), family_index, points, witnesses })
    }

    /// Drops points no witness refers to and renumbers the rest.
    pub fn pruned(mut self) -> Self {
        let mut used: Vec<usize> = self.witnesses.values().copied().collect();
        used.sort_unstable();
        used.dedup();
        let points = used.iter().map(|&i| self.points[i]).collect();
        for w in self.witnesses.values_mut() {
            *w = used.binary_search(w).expect("witness points are kept");
        }
        self.points = points;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

fn certified_keys(inst: &ColoredInstance, family_index: usize, scope: Scope) -> Result<Vec<TranslateKey>, CertificateFault> {
    if family_index >= inst.families.len() {
        return Err(CertificateFault::FamilyOutOfRange(family_index));
    }
    Ok(match scope {
        Scope::Family => (0..inst.families[family_index].translates.len())
            .map(|index| TranslateKey { family: None, index })
            .collect(),
        Scope::Complement => (0..inst.families.len())
            .filter(|&f| f != family_index)
            .flat_map(|f| (0..inst.families[f].translates.len()).map(move |index| TranslateKey { family: Some(f), index }))
            .collect(),
    })
}

fn body_for(inst: &ColoredInstance, family_index: usize, key: TranslateKey) -> ConvexBody {
    inst.placed(key.family.unwrap_or(family_index), key.index)
}

/// Full check of a piercing certificate with the given slack.
pub fn verify_piercing(inst: &ColoredInstance, cert: &PiercingCertificate, slack: f64) -> Result<(), CertificateFault> {
    if cert.points.len() > MAX_POINTS {
        return Err(CertificateFault::TooManyPoints(cert.points.len()));
    }
    let keys = certified_keys(inst, cert.family_index, cert.scope())?;
    if let Some(extra) = cert.witnesses.keys().find(|k| !keys.contains(k)) {
        return Err(CertificateFault::UnexpectedWitness(*extra));
    }
    for key in keys {
        let &point = cert.witnesses.get(&key).ok_or(CertificateFault::MissingWitness(key))?;
        let p = *cert.points.get(point).ok_or(CertificateFault::PointOutOfRange { key, point })?;
        if !body_for(inst, cert.family_index, key).contains(p, slack) {
            return Err(CertificateFault::NotContained { key, point });
        }
    }
    Ok(())
}

/// Full check of a cover certificate against point sets.
pub fn verify_cover(sets: &PointSetInstance, cert: &CoverCertificate, slack: f64) -> Result<(), CertificateFault> {
    if cert.covers.len() > MAX_POINTS {
        return Err(CertificateFault::TooManyPoints(cert.covers.len()));
    }
    if cert.excluded_index >= sets.sets.len() {
        return Err(CertificateFault::FamilyOutOfRange(cert.excluded_index));
    }
    let keys: Vec<TranslateKey> = (0..sets.sets.len())
        .filter(|&f| f != cert.excluded_index)
        .flat_map(|f| (0..sets.sets[f].len()).map(move |index| TranslateKey { family: Some(f), index }))
        .collect();
    if let Some(extra) = cert.witnesses.keys().find(|k| !keys.contains(k)) {
        return Err(CertificateFault::UnexpectedWitness(*extra));
    }
    for key in keys {
        let &cover = cert.witnesses.get(&key).ok_or(CertificateFault::MissingWitness(key))?;
        let body = cert.covers.get(cover).ok_or(CertificateFault::PointOutOfRange { key, point: cover })?;
        let p = sets.sets[key.family.expect("complement keys")][key.index];
        if !body.contains(p, slack) {
            return Err(CertificateFault::NotContained { key, point: cover });
        }
    }
    Ok(())
}

/// `true` iff the certificate verifies with the standard slack and uses at
/// most three points.
pub fn check_certificate(inst: &ColoredInstance, cert: &PiercingCertificate) -> bool {
    verify_piercing(inst, cert, CERT_SLACK).is_ok()
}

pub fn check_cover_certificate(sets: &PointSetInstance, cert: &CoverCertificate) -> bool {
    verify_cover(sets, cert, CERT_SLACK).is_ok()
}
