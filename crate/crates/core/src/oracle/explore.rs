use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{min_piercing_exact, OracleError};
use crate::geometry::Point2;
use crate::instance::{generate_instance, BodyKind, ColoredInstance, GenSpec};

/// Recorded value when every complement exceeds the oracle bound of 5.
pub const EXCEEDED_VALUE: usize = 6;

const ORACLE_BOUND: usize = 5;
const HILL_STEPS: usize = 8;
const STEP_RADIUS: f64 = 0.5;

/// One trial: the instance reached and its value,
/// `min over m of π(union of all families except m)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExploreRecord {
    pub seed: u64,
    pub trial: usize,
    pub value: usize,
    pub instance: ColoredInstance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExploreReport {
    pub records: Vec<ExploreRecord>,
    pub max_value: usize,
    /// Trials whose value exceeds 3.
    pub counterexamples: Vec<usize>,
}

/// `min over m` of the piercing number of all families but `m`.
pub fn conjecture_value(inst: &ColoredInstance) -> usize {
    let mut best = EXCEEDED_VALUE;
    for m in 0..inst.num_families() {
        let union: Vec<_> = (0..inst.num_families()).filter(|&f| f != m).flat_map(|f| inst.placed_family(f)).collect();
        match min_piercing_exact(&union, (best - 1).min(ORACLE_BOUND)) {
            Ok(res) => best = best.min(res.pi),
            Err(OracleError::BoundExceeded(_)) | Err(OracleError::TooLarge(_)) => {}
        }
        if best <= 1 {
            break;
        }
    }
    best
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Moves single translates at random, keeping the instance
/// cross-intersecting and never lowering its value.
fn hill_climb(mut inst: ColoredInstance, rng: &mut ChaCha8Rng) -> (ColoredInstance, usize) {
    let gauge = inst.gauge();
    let mut value = conjecture_value(&inst);
    for _ in 0..HILL_STEPS {
        let f = rng.gen_range(0..inst.num_families());
        let i = rng.gen_range(0..inst.families[f].translates.len());
        let dir = gauge.boundary_point(Point2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)));
        let moved = inst.families[f].translates[i] + dir * (STEP_RADIUS * rng.gen::<f64>());
        let fits = inst
            .families
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .all(|(_, fam)| fam.translates.iter().all(|&s| gauge.distance(s, moved) <= 2.0));
        if !fits {
            continue;
        }
        let mut next = inst.clone();
        next.families[f].translates[i] = moved;
        let v = conjecture_value(&next);
        if v >= value {
            inst = next;
            value = v;
        }
    }
    (inst, value)
}

fn finish(records: Vec<ExploreRecord>) -> ExploreReport {
    let max_value = records.iter().map(|r| r.value).max().unwrap_or(0);
    let counterexamples = records.iter().filter(|r| r.value > 3).map(|r| r.trial).collect();
    ExploreReport { records, max_value, counterexamples }
}

/// Randomized search over `k`-colored instances with the given body.
/// Trial 0 evaluates the seed instance as generated; trials `1..=budget`
/// hill-climb from fresh instances.
pub fn explore_conjecture(seed: u64, budget: usize, k: usize, body: BodyKind) -> ExploreReport {
    let records = (0..=budget)
        .into_par_iter()
        .filter_map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let sizes = (0..k.max(2)).map(|_| rng.gen_range(2..=4)).collect();
            let spread = rng.gen_range(1.0..3.0);
            let inst = generate_instance(rng.gen(), &GenSpec::new(body, sizes, spread)).ok()?;
            let (instance, value) =
                if trial == 0 { (inst.clone(), conjecture_value(&inst)) } else { hill_climb(inst, &mut rng) };
            Some(ExploreRecord { seed, trial, value, instance })
        })
        .collect();
    finish(records)
}

/// Like [`explore_conjecture`] but every trial starts from `initial`.
pub fn explore_from(seed: u64, budget: usize, initial: &ColoredInstance) -> ExploreReport {
    let records = (0..=budget)
        .into_par_iter()
        .map(|trial| {
            let (instance, value) = if trial == 0 {
                (initial.clone(), conjecture_value(initial))
            } else {
                hill_climb(initial.clone(), &mut trial_rng(seed, trial))
            };
            ExploreRecord { seed, trial, value, instance }
        })
        .collect();
    finish(records)
}

/// One JSON object per line.
pub fn write_jsonl<W: Write>(records: &[ExploreRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
