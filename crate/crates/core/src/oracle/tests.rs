use proptest::prelude::*;

use super::*;
use crate::instance::{generate_instance, BodyKind, GenSpec, PiercingCertificate, Scope};

fn square_at(x: f64, y: f64) -> ConvexBody {
    ConvexBody::polygon(vec![
        Point2::new(x, y),
        Point2::new(x + 1.0, y),
        Point2::new(x + 1.0, y + 1.0),
        Point2::new(x, y + 1.0),
    ])
    .unwrap()
}

fn disk_at(x: f64, y: f64, r: f64) -> ConvexBody {
    ConvexBody::disk(Point2::new(x, y), r).unwrap()
}

/// Exhaustive subset enumeration over the candidate list.
fn brute_pi(family: &[ConvexBody]) -> usize {
    let cands = candidate_points(family);
    let pierces = |set: &[usize]| family.iter().all(|b| set.iter().any(|&c| b.contains(cands[c], 1e-9)));
    for size in 1..=family.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if pierces(&idx) {
                return size;
            }
            // Next combination in lexicographic order.
            let mut i = size;
            while i > 0 && idx[i - 1] == cands.len() - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    family.len()
}

fn pierces_all(family: &[ConvexBody], points: &[Point2]) -> bool {
    family.iter().all(|b| points.iter().any(|&p| b.contains(p, 1e-9)))
}

#[test]
fn overlapping_squares_candidates() {
    let c = candidate_points(&[square_at(0.0, 0.0), square_at(0.5, 0.5)]);
    // 8 vertices, 2 centers, 2 proper crossings.
    assert!(c.len() >= 10);
    assert!(c.iter().any(|p| p.distance(Point2::new(1.0, 0.5)) < 1e-12));
    assert!(c.iter().any(|p| p.distance(Point2::new(0.5, 1.0)) < 1e-12));
}

#[test]
fn disjoint_bodies_give_vertices_and_centers_only() {
    let c = candidate_points(&[square_at(0.0, 0.0), square_at(3.0, 0.0)]);
    assert_eq!(c.len(), 10);
}

#[test]
fn tangent_disks_give_three_candidates() {
    let c = candidate_points(&[disk_at(0.0, 0.0, 1.0), disk_at(2.0, 0.0, 1.0)]);
    assert_eq!(c.len(), 3);
    assert!(c.iter().any(|p| p.distance(Point2::new(1.0, 0.0)) < 1e-9));
}

#[test]
fn common_point_gives_one() {
    let fam = [square_at(0.0, 0.0), square_at(0.5, 0.2), square_at(-0.3, 0.6)];
    let res = min_piercing_exact(&fam, 5).unwrap();
    assert_eq!(res.pi, 1);
    assert!(pierces_all(&fam, &res.points));
}

#[test]
fn three_disjoint_give_three() {
    let fam = [square_at(0.0, 0.0), square_at(2.0, 0.0), square_at(4.0, 0.0)];
    assert_eq!(min_piercing_exact(&fam, 5).unwrap().pi, 3);
    assert_eq!(min_piercing_exact(&fam, 2).unwrap_err(), OracleError::BoundExceeded(2));
}

#[test]
fn chain_of_squares_gives_two() {
    let fam = [square_at(0.0, 0.0), square_at(0.9, 0.0), square_at(1.8, 0.0)];
    let res = min_piercing_exact(&fam, 5).unwrap();
    assert_eq!(res.pi, 2);
    assert_eq!(brute_pi(&fam), 2);
    assert!(pierces_all(&fam, &res.points));
}

#[test]
fn empty_family_has_zero() {
    assert_eq!(min_piercing_exact(&[], 3).unwrap().pi, 0);
}

#[test]
fn oversize_family_is_refused() {
    let fam = vec![square_at(0.0, 0.0); MAX_FAMILY + 1];
    assert_eq!(min_piercing_exact(&fam, 3).unwrap_err(), OracleError::TooLarge(MAX_FAMILY + 1));
}

fn triple_instance() -> ColoredInstance {
    ColoredInstance::from_translates(
        square_at(-0.5, -0.5),
        vec![
            vec![Point2::new(0.0, 0.0), Point2::new(0.9, 0.0)],
            vec![Point2::new(0.5, 0.0)],
        ],
    )
    .unwrap()
}

#[test]
fn verify_accepts_valid_and_notes_excess_points() {
    let inst = triple_instance();
    let cert = PiercingCertificate::assign(
        &inst,
        "manual",
        0,
        vec![Point2::new(0.0, 0.0), Point2::new(0.9, 0.0)],
        Scope::Family,
    )
    .unwrap();
    let report = verify_theorem(&inst, &cert);
    assert!(report.ok);
    assert_eq!(report.oracle_pi, Some(1));
    assert!(report.notes.iter().any(|n| n.contains("non-optimal")));
}

#[test]
fn verify_rejects_wrong_family() {
    let inst = triple_instance();
    let mut cert =
        PiercingCertificate::assign(&inst, "manual", 0, vec![Point2::new(0.45, 0.0)], Scope::Family).unwrap();
    assert!(verify_theorem(&inst, &cert).ok);
    cert.family_index = 1;
    let report = verify_theorem(&inst, &cert);
    assert!(!report.ok);
    assert!(report.certificate_error.is_some());
}

#[test]
fn square_diagonal_pairs_value_is_small() {
    let inst = ColoredInstance::from_translates(
        ConvexBody::disk(Point2::ORIGIN, 0.5).unwrap(),
        vec![
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)],
            vec![Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)],
        ],
    )
    .unwrap();
    let report = explore_from(3, 20, &inst);
    assert_eq!(report.records[0].value, 2);
    assert!(report.max_value <= 3);
}

#[test]
fn zero_budget_evaluates_only_the_seed_instance() {
    let report = explore_conjecture(5, 0, 3, BodyKind::Disk);
    assert_eq!(report.records.len(), 1);
    assert_eq!(report.records[0].trial, 0);
    let mut buf = Vec::new();
    write_jsonl(&report.records, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let line: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    for key in ["seed", "trial", "value", "instance"] {
        assert!(line.get(key).is_some());
    }
}

#[test]
fn exploration_is_deterministic() {
    let a = explore_conjecture(11, 6, 3, BodyKind::Triangle);
    let b = explore_conjecture(11, 6, 3, BodyKind::Triangle);
    assert_eq!(a, b);
    assert!(a.max_value <= 3);
}

fn family_strategy() -> impl Strategy<Value = Vec<ConvexBody>> {
    (any::<u64>(), prop_oneof![Just(BodyKind::Disk), Just(BodyKind::Square), Just(BodyKind::RandomPolygon)], 1usize..8)
        .prop_map(|(seed, kind, n)| {
            let inst = generate_instance(seed, &GenSpec::new(kind, vec![n, 1], 3.0)).unwrap();
            inst.placed_family(0)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_matches_exhaustive(fam in family_strategy()) {
        let res = min_piercing_exact(&fam, 8).unwrap();
        prop_assert!(pierces_all(&fam, &res.points));
        prop_assert_eq!(res.pi, brute_pi(&fam));
    }

    #[test]
    fn adding_a_body_never_lowers_pi(fam in family_strategy(), extra in family_strategy()) {
        let base = min_piercing_exact(&fam, 8).unwrap().pi;
        let mut bigger = fam.clone();
        bigger.push(extra[0].clone());
        prop_assert!(min_piercing_exact(&bigger, 9).unwrap().pi >= base);
    }

    #[test]
    fn extra_candidates_never_lower_pi(fam in family_strategy(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let extra: Vec<Point2> = (0..1000).map(|_| Point2::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0))).collect();
        let base = min_piercing_exact(&fam, 8).unwrap().pi;
        prop_assert_eq!(min_piercing_with_candidates(&fam, &extra, 8).unwrap().pi, base);
    }
}
