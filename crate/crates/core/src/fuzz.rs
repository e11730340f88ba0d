//! Seeded fuzzing: generate, pierce, then check against the oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::instance::{generate_instance, BodyKind, ColoredInstance, GenSpec, PiercingCertificate};
use crate::oracle::verify_theorem;
use crate::pierce::{pierce, resolve_method, Method, PierceError};

/// Largest family size the fuzzer generates.
pub const MAX_FAMILY_SIZE: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub method: Method,
}

/// Everything needed to reproduce one trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSpec {
    pub trial: usize,
    pub seed: u64,
    pub gen: GenSpec,
    pub instance_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub spec: TrialSpec,
    pub method: Method,
    pub error: String,
    pub instance: Option<ColoredInstance>,
    pub certificate: Option<PiercingCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub method: Method,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Trials per concrete method, in `Method` order.
    pub by_method: Vec<(Method, usize)>,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn bodies_for(method: Method) -> &'static [BodyKind] {
    match method {
        Method::Symmetric | Method::Jung => {
            &[BodyKind::RandomSymmetric, BodyKind::Square, BodyKind::RegularPolygon(6), BodyKind::Disk]
        }
        Method::Triangle => &[BodyKind::Triangle, BodyKind::RandomTriangle],
        Method::Disk => &[BodyKind::Disk],
        Method::FourColor => &[
            BodyKind::Disk,
            BodyKind::RegularPolygon(6),
            BodyKind::RandomSymmetric,
            BodyKind::RandomPolygon,
            BodyKind::Triangle,
            BodyKind::RandomTriangle,
        ],
        Method::Auto => &[
            BodyKind::Disk,
            BodyKind::Triangle,
            BodyKind::RandomTriangle,
            BodyKind::RandomSymmetric,
            BodyKind::Square,
            BodyKind::RegularPolygon(6),
            BodyKind::RandomPolygon,
        ],
    }
}

fn colors_for<R: Rng>(method: Method, body: BodyKind, rng: &mut R) -> usize {
    match method {
        Method::Disk => rng.gen_range(2..=4),
        Method::FourColor => 4,
        Method::Auto => match body {
            BodyKind::Disk => rng.gen_range(2..=4),
            BodyKind::RandomPolygon => 4,
            _ => rng.gen_range(3..=4),
        },
        _ => 3,
    }
}

/// The generator settings of one trial, a pure function of `(seed, trial)`.
pub fn trial_spec(seed: u64, trial: usize, method: Method) -> TrialSpec {
    let mut rng = trial_rng(seed, trial);
    let kinds = bodies_for(method);
    let body = kinds[rng.gen_range(0..kinds.len())];
    let k = colors_for(method, body, &mut rng);
    let max_size = if k == 4 { 4 } else { MAX_FAMILY_SIZE };
    let sizes = (0..k).map(|_| rng.gen_range(1..=max_size)).collect();
    let spread = rng.gen_range(0.5..2.5);
    TrialSpec { trial, seed, gen: GenSpec::new(body, sizes, spread), instance_seed: rng.gen() }
}

/// Runs one trial with `piercer`; `Err` carries the failure record.
pub fn run_trial<F>(spec: &TrialSpec, method: Method, piercer: &F) -> Result<Method, FuzzFailure>
where
    F: Fn(&ColoredInstance, Method) -> Result<PiercingCertificate, PierceError> + Sync,
{
    let fail = |error: String, instance: Option<&ColoredInstance>, cert: Option<PiercingCertificate>| FuzzFailure {
        spec: spec.clone(),
        method,
        error,
        instance: instance.cloned(),
        certificate: cert,
    };
    let inst = generate_instance(spec.instance_seed, &spec.gen).map_err(|e| fail(e.to_string(), None, None))?;
    let resolved = resolve_method(&inst, method).map_err(|e| fail(e.to_string(), Some(&inst), None))?;
    let cert = piercer(&inst, resolved).map_err(|e| fail(e.to_string(), Some(&inst), None))?;
    let report = verify_theorem(&inst, &cert);
    if !report.ok {
        let msg = report.certificate_error.unwrap_or_else(|| report.notes.join("; "));
        return Err(fail(msg, Some(&inst), Some(cert)));
    }
    Ok(resolved)
}

pub fn run_fuzz(cfg: &FuzzConfig) -> FuzzSummary {
    run_fuzz_with(cfg, &pierce)
}

/// Fuzzes an arbitrary piercer. Trials run in parallel; the summary only
/// depends on the configuration.
pub fn run_fuzz_with<F>(cfg: &FuzzConfig, piercer: &F) -> FuzzSummary
where
    F: Fn(&ColoredInstance, Method) -> Result<PiercingCertificate, PierceError> + Sync,
{
    let results: Vec<Result<Method, FuzzFailure>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(&trial_spec(cfg.seed, t, cfg.method), cfg.method, piercer))
        .collect();
    let mut by_method: Vec<(Method, usize)> = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(m) => match by_method.iter_mut().find(|(x, _)| *x == m) {
                Some(entry) => entry.1 += 1,
                None => by_method.push((m, 1)),
            },
            Err(f) => failures.push(f),
        }
    }
    by_method.sort();
    FuzzSummary {
        seed: cfg.seed,
        method: cfg.method,
        trials: cfg.trials,
        passed: cfg.trials - failures.len(),
        failed: failures.len(),
        by_method,
        failures,
    }
}
