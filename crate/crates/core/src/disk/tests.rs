use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::{circumcircle, min_enclosing_circle};
use crate::instance::{check_certificate, check_cover_certificate, generate_instance, verify_cover, BodyKind, GenSpec};

const S3: f64 = 1.732_050_807_568_877_2;

fn covered(disks: &[Disk], pts: &[Point2], slack: f64) -> bool {
    pts.iter().all(|&p| disks.iter().any(|d| d.contains(p, slack)))
}

fn sets(v: &[&[(f64, f64)]]) -> PointSetInstance {
    PointSetInstance { sets: v.iter().map(|s| s.iter().map(|&(x, y)| Point2::new(x, y)).collect()).collect() }
}

#[test]
fn lens_constants_at_the_smallest_separation() {
    let lc = lens_cover();
    assert!((lc.lens.r - 2.0 / S3).abs() < 1e-15);
    assert!(lc.lens.b.distance(lc.e) < 1.0);
    assert!(lc.lens.b.distance(lc.c) < 1.0);
    let (_, r) = circumcircle(lc.lens.a, lc.c, lc.e).unwrap();
    assert!(r < 0.5);
    assert!(lc.disks.iter().all(|d| d.diameter() <= 1.0 - DIAMETER_MARGIN));
    // c and e sit on the lens boundary, mirrored across the axis.
    let [left, right] = lc.lens.disks();
    assert!((lc.c.distance(right.center) - 1.0).abs() < 1e-12 && (lc.e.distance(left.center) - 1.0).abs() < 1e-12);
    assert!((lc.c.x + lc.e.x).abs() < 1e-12 && (lc.c.y - lc.e.y).abs() < 1e-12);
}

#[test]
fn lens_cover_covers_sampled_lenses() {
    for r in [LENS_R0, 1.3, 1.5, 1.8, 1.99] {
        let samples = LensRegion::new(r).samples(2000);
        assert!(samples.len() >= 1500);
        assert!(covered(&lens_cover_three(r), &samples, 1e-12), "r = {r}");
    }
    let tip = LensRegion::new(2.0);
    assert!(tip.a.distance(Point2::ORIGIN) < 1e-12);
    assert!(lens_cover_three(2.0).iter().any(|d| d.contains(Point2::ORIGIN, 0.0)));
}

#[test]
fn strip_frame_constants() {
    let f = strip_frame();
    let a = f.lens.a;
    assert!(f.o1.distance(a) < 0.47 + 1e-9, "{}", f.o1.distance(a));
    assert!(f.q.distance(a) < 0.72 + 1e-9, "{}", f.q.distance(a));
    assert!(f.alpha_deg < 39.3, "{}", f.alpha_deg);
    assert!(f.o1.x.abs() < 1e-12 && (f.q.distance(-f.p) - 1.0).abs() < 1e-12);
    assert!((-f.p).distance(f.q_prime) < 1.0 - DIAMETER_MARGIN);
    assert!(((-f.p).distance(f.q_prime) - (-f.p).distance(f.s_prime)).abs() < 1e-12);
    assert!((f.z.y - 1.0 / S3).abs() < 1e-15 && (f.x.y + 1.0 / S3).abs() < 1e-15);
    assert!(f.lens.contains(f.z, 1e-12) && f.lens.contains(f.w, 1e-12));
}

#[test]
fn strip_covers_cover_their_half_lenses() {
    let f = strip_frame();
    let samples = f.lens.samples(4000);
    let upper: Vec<Point2> = samples.iter().copied().filter(|p| p.y >= f.x.y).collect();
    let lower: Vec<Point2> = samples.iter().copied().filter(|p| p.y <= f.z.y).collect();
    assert!(upper.len() >= 2000 && lower.len() >= 2000);
    assert!(covered(&f.cover(StripSide::Upper), &upper, 1e-12));
    assert!(covered(&f.cover(StripSide::Lower), &lower, 1e-12));
    assert!(f.upper.iter().all(|d| d.diameter() <= 1.0 - DIAMETER_MARGIN));
}

#[test]
fn strip_cover_sides() {
    let f = strip_frame();
    let (side, disks) = strip_cover_three(&[Point2::ORIGIN], f).unwrap();
    assert_eq!(side, StripSide::Upper);
    assert!(covered(&disks, &[Point2::ORIGIN], 0.0));
    let near_top = [f.lens.a - Point2::new(0.0, 0.01), f.lens.a - Point2::new(0.02, 0.05)];
    let (side, disks) = strip_cover_three(&near_top, f).unwrap();
    assert_eq!(side, StripSide::Upper);
    assert!(covered(&disks, &near_top, 0.0));
    let (side, _) = strip_cover_three(&[Point2::new(0.0, -0.8)], f).unwrap();
    assert_eq!(side, StripSide::Lower);
    let both = [Point2::new(0.0, 0.8), Point2::new(0.0, -0.8)];
    assert_eq!(strip_cover_three(&both, f), Err(DiskError::RegionConflict));
}

#[test]
fn borsuk_single_point() {
    let c = borsuk_three_cover(&[Point2::new(3.0, -1.0)]);
    assert!(c.disks.iter().all(|d| d.center == Point2::new(3.0, -1.0)));
}

fn check_borsuk(pts: &[Point2]) {
    let c = borsuk_three_cover(pts);
    assert!(c.disks.iter().all(|d| d.diameter() <= S3 / 2.0 + 1e-6), "{:?}", c.disks);
    assert!(covered(&c.disks, pts, 1e-9));
}

#[test]
fn borsuk_covers_a_unit_diameter_disk() {
    let center = Point2::new(0.3, -0.2);
    let pts: Vec<Point2> = (0..360).map(|i| center + Point2::from_angle((i as f64).to_radians()) * 0.5).collect();
    check_borsuk(&pts);
}

#[test]
fn borsuk_covers_a_reuleaux_triangle() {
    let v = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, S3 / 2.0)];
    let mut pts = Vec::new();
    for k in 0..3 {
        let (c, a, b) = (v[k], v[(k + 1) % 3], v[(k + 2) % 3]);
        let (ta, tb) = ((a - c).y.atan2((a - c).x), (b - c).y.atan2((b - c).x));
        let span = (tb - ta).rem_euclid(std::f64::consts::TAU);
        for i in 0..240 {
            pts.push(c + Point2::from_angle(ta + span * i as f64 / 239.0));
        }
    }
    check_borsuk(&pts);
}

#[test]
fn borsuk_covers_random_unit_diameter_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let n = rng.gen_range(2..40);
        let raw: Vec<Point2> = (0..n).map(|_| Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let (d, _, _) = diameter_pair(&raw);
        let pts: Vec<Point2> = raw.iter().map(|&p| p / d).collect();
        check_borsuk(&pts);
    }
}

#[test]
fn square_diagonals_use_the_lens() {
    let inst = sets(&[&[(0.0, 0.0), (1.0, 1.0)], &[(1.0, 0.0), (0.0, 1.0)]]);
    let out = disk_pierce(&inst).unwrap();
    assert_eq!(out.case, DiskCase::Lens);
    assert_eq!(out.certificate.excluded_index, 0);
    assert!((out.diameter - 2f64.sqrt()).abs() < 1e-12);
    assert!(check_cover_certificate(&inst, &out.certificate));
}

#[test]
fn coincident_singletons_are_small() {
    let inst = sets(&[&[(0.5, 0.5)], &[(0.5, 0.5)], &[(0.5, 0.5)]]);
    let out = disk_pierce(&inst).unwrap();
    assert_eq!(out.case, DiskCase::SmallDiameter);
    assert!(check_cover_certificate(&inst, &out.certificate));
}

#[test]
fn small_random_sets_and_the_two_over_root_three_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let v: Vec<Vec<Point2>> = (0..3)
            .map(|_| {
                (0..rng.gen_range(1..8))
                    .map(|_| Point2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * (0.4 * rng.gen::<f64>().sqrt()))
                    .collect()
            })
            .collect();
        let inst = PointSetInstance { sets: v };
        let out = disk_pierce(&inst).unwrap();
        assert_eq!(out.case, DiskCase::SmallDiameter);
        assert!(check_cover_certificate(&inst, &out.certificate));
        assert!(inst.sets.iter().any(|s| diameter_pair(s).0 <= 2.0 / S3));
    }
}

#[test]
fn far_pair_is_rejected() {
    let inst = sets(&[&[(0.0, 0.0)], &[(1.5, 0.0)]]);
    match disk_pierce(&inst) {
        Err(DiskError::InvalidInput(p)) => assert!((p.distance - 1.5).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_disk_generator_is_rejected() {
    let inst = generate_instance(1, &GenSpec::uniform(BodyKind::Square, 3, 2, 1.0)).unwrap();
    assert_eq!(disk_pierce_instance(&inst).unwrap_err(), DiskError::NotDisk);
}

fn assert_outcome(sets: &PointSetInstance, out: &DiskOutcome) {
    assert!(verify_cover(sets, &out.certificate, 1e-7).is_ok());
    for c in &out.certificate.covers {
        let ConvexBody::Disk(d) = c else { panic!("disk cover expected") };
        assert!(d.diameter() <= 1.0 - DIAMETER_MARGIN);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fuzzed_disk_families_are_covered_and_pierced(
        seed in any::<u64>(),
        sizes in prop::collection::vec(1usize..=8, 2..=4),
        spread in 0.5f64..3.0,
        radius in 0.2f64..3.0,
    ) {
        let inst = generate_instance(seed, &GenSpec::new(BodyKind::Disk, sizes, spread)).unwrap();
        let inst = ColoredInstance::new(ConvexBody::disk(Point2::new(0.1, 0.2), radius).unwrap(), inst.families.iter().map(|f| {
            crate::instance::Family { color: f.color, translates: f.translates.iter().map(|&t| t * (2.0 * radius)).collect() }
        }).collect()).unwrap();
        let (sets, scale) = center_sets(&inst).unwrap();
        let (out, cert) = disk_pierce_instance(&inst).unwrap();
        assert_outcome(&sets, &out);
        prop_assert!(check_certificate(&inst, &cert));
        // Each piercing point is strictly inside the disks it certifies.
        for (key, &w) in &cert.witnesses {
            let f = key.family.unwrap();
            let center = Point2::new(0.1, 0.2) + inst.families[f].translates[key.index];
            prop_assert!(cert.points[w].distance(center) <= radius - 1e-6 * scale);
        }
        let all: Vec<Point2> = sets.sets.iter().flatten().copied().collect();
        let _ = min_enclosing_circle(&all);
    }
}
