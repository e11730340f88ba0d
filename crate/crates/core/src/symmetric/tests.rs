use proptest::prelude::*;

use super::*;
use crate::geometry::{difference_gauge, min_enclosing_circle, Polygon};
use crate::instance::{check_certificate, generate_instance, BodyKind, GenSpec};
use crate::oracle::verify_theorem;

const S3: f64 = 1.732_050_807_568_877_2;

fn unit_disk() -> ConvexBody {
    ConvexBody::disk(Point2::ORIGIN, 1.0).unwrap()
}

fn disks(families: &[&[(f64, f64)]]) -> ColoredInstance {
    ColoredInstance::from_translates(
        unit_disk(),
        families.iter().map(|f| f.iter().map(|&(x, y)| Point2::new(x, y)).collect()).collect(),
    )
    .unwrap()
}

/// Lowest point of two unit disks: a disk bottom inside the other disk, or
/// the lower boundary crossing.
fn closed_form_lowest(a: Point2, b: Point2) -> Option<Point2> {
    let d = a.distance(b);
    if d > 2.0 {
        return None;
    }
    let down = Point2::new(0.0, -1.0);
    let mut cands = Vec::new();
    if (a + down).distance(b) <= 1.0 + 1e-12 {
        cands.push(a + down);
    }
    if (b + down).distance(a) <= 1.0 + 1e-12 {
        cands.push(b + down);
    }
    let mid = a.midpoint(b);
    let h = (1.0 - d * d / 4.0).max(0.0).sqrt();
    if d > 0.0 {
        let n = (b - a).perp() / d;
        cands.push(mid + n * h);
        cands.push(mid - n * h);
    }
    cands.into_iter().min_by(|p, q| p.cmp_yx(q))
}

#[test]
fn best_pair_is_highest_closed_form_minimum() {
    let inst = disks(&[&[(0.0, 0.0), (0.3, -0.4)], &[(1.6, 0.2)], &[(0.9, 1.2), (0.5, 0.6)]]);
    let best = best_cross_pair(&inst).unwrap();
    let mut expected: Option<Point2> = None;
    for ((f, i), (g, j)) in inst.cross_pairs() {
        if let Some(p) = closed_form_lowest(inst.families[f].translates[i], inst.families[g].translates[j]) {
            if expected.map_or(true, |e| p.y > e.y) {
                expected = Some(p);
            }
        }
    }
    assert!(best.p.distance(expected.unwrap()) < 1e-9);
}

#[test]
fn best_pair_skips_disjoint_pairs() {
    let inst = disks(&[&[(0.0, 0.0)], &[(2.0, 0.0)], &[(1.0, 2.0)]]);
    let best = best_cross_pair(&inst).unwrap();
    assert_eq!((best.family_a, best.family_b), (0, 1));
    assert!(best.p.distance(Point2::new(1.0, 0.0)) < 1e-6);
}

#[test]
fn coincident_translates_give_bottom_of_body() {
    let inst = disks(&[&[(0.0, 0.0)], &[(0.0, 0.0)], &[(0.0, 0.0)]]);
    let c = symmetric_construction(&inst).unwrap();
    assert!(c.p.distance(Point2::new(0.0, -1.0)) < 1e-9);
    assert!(c.q.distance(Point2::new(0.0, -2.0)) < 1e-12);
    assert!(c.r1.distance(c.p) < 1e-9 && c.r2.distance(c.p) < 1e-9);
    let cert = symmetric_pierce(&inst).unwrap();
    assert_eq!(cert.points.len(), 1);
    assert!(check_certificate(&inst, &cert));
}

#[test]
fn disk_example_matches_analytic_construction() {
    let inst = disks(&[&[(0.0, 0.0)], &[(2.0, 0.0)], &[(1.0, 1.0)]]);
    let c = symmetric_construction(&inst).unwrap();
    assert_eq!((c.pair.family_a, c.pair.family_b, c.m), (0, 1, 2));
    assert!(c.p.distance(Point2::new(1.0, 0.0)) < 1e-6);
    assert!(c.q.distance(Point2::new(1.0, -S3)) < 1e-9);
    assert!(c.r1.distance(Point2::new(0.5, -S3 / 2.0)) < 1e-9);
    assert!(c.r2.distance(Point2::new(1.5, -S3 / 2.0)) < 1e-9);
    assert!((c.x1.distance(c.q) - 2.0).abs() < 1e-7 && (c.x2.distance(c.q) - 2.0).abs() < 1e-7);
    assert!(c.y1.distance(Point2::new(2.0, 0.0)) < 1e-6);
    let cert = symmetric_pierce(&inst).unwrap();
    assert!(check_certificate(&inst, &cert));
    assert!(claim_violations(&inst, &c).unwrap().is_empty());
}

#[test]
fn asymmetric_generator_is_rejected() {
    let tri = ConvexBody::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]).unwrap();
    let inst = ColoredInstance::from_translates(tri, vec![vec![Point2::ORIGIN]; 3]).unwrap();
    assert_eq!(symmetric_pierce(&inst).unwrap_err(), SymmetricError::NotSymmetric);
    assert_eq!(colorful_jung_pierce(&inst).unwrap_err(), SymmetricError::NotSymmetric);
}

#[test]
fn separated_pair_is_reported() {
    let inst = disks(&[&[(0.0, 0.0)], &[(2.5, 0.0)], &[(1.0, 0.0)]]);
    assert!(matches!(symmetric_pierce(&inst), Err(SymmetricError::NotCrossIntersecting(_))));
}

/// Independent estimate: a coarse exhaustive grid over the parameters.
fn grid_jung_euclidean() -> f64 {
    let mut best: f64 = 0.0;
    let n = 72;
    for a in 0..n {
        for b in 0..n {
            for su in [0.8, 0.9, 1.0] {
                for sv in [0.8, 0.9, 1.0] {
                    let u = Point2::from_angle(TAU_F * a as f64 / n as f64) * (2.0 * su);
                    let v = Point2::from_angle(TAU_F * b as f64 / n as f64) * (2.0 * sv);
                    if u.distance(v) <= 2.0 {
                        best = best.max(min_enclosing_circle(&[Point2::ORIGIN, u, v]).1);
                    }
                }
            }
        }
    }
    best
}

const TAU_F: f64 = std::f64::consts::TAU;

#[test]
fn euclidean_jung_radius() {
    let g = Gauge::new(unit_disk()).unwrap();
    let data = jung_radius(&g);
    assert!((data.j - 2.0 / S3).abs() < 1e-4, "{}", data.j);
    assert!(data.j + 1e-9 >= grid_jung_euclidean());
    let w = data.witness;
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        assert!(g.distance(w[a], w[b]) <= 2.0 + 1e-9);
    }
    assert_eq!(data.starts, 576);
}

#[test]
fn parallelogram_jung_radius_is_one() {
    let square = ConvexBody::polygon(vec![
        Point2::new(-1.0, -1.0),
        Point2::new(1.0, -1.0),
        Point2::new(1.0, 1.0),
        Point2::new(-1.0, 1.0),
    ])
    .unwrap();
    let data = jung_radius(&Gauge::new(square).unwrap());
    assert!((data.j - 1.0).abs() < 1e-4, "{}", data.j);
    let skew = ConvexBody::polygon(vec![
        Point2::new(-1.3, -0.4),
        Point2::new(0.7, -0.4),
        Point2::new(1.3, 0.4),
        Point2::new(-0.7, 0.4),
    ])
    .unwrap();
    let data = jung_radius(&Gauge::new(skew).unwrap());
    assert!(data.j >= 1.0 - 1e-9 && data.j <= 1.0 + 1e-4, "{}", data.j);
}

#[test]
fn jung_radius_is_scale_free() {
    let hex = difference_gauge(&ConvexBody::Polygon(
        Polygon::new((0..6).map(|i| Point2::from_angle(TAU_F * i as f64 / 6.0 + 0.1)).collect()).unwrap(),
    ));
    let a = jung_radius(&hex).j;
    let b = jung_radius(&hex.scaled(2.0)).j;
    assert!((a - b).abs() < 1e-9);
    assert!(a > 1.0 + 1e-3);
}

/// Dense grid over the ball's bounding box.
fn dense_cover_check(g: &Gauge, j: f64, centers: &[Point2; 3]) -> bool {
    let r = g.unit_ball().radius_bound() * j;
    let n = 120;
    (0..=n).all(|a| {
        (0..=n).all(|b| {
            let p = Point2::new(-r + 2.0 * r * a as f64 / n as f64, -r + 2.0 * r * b as f64 / n as f64);
            g.norm(p) > j || centers.iter().any(|&c| g.distance(c, p) <= 1.0 + 1e-9)
        })
    })
}

#[test]
fn jung_cover_trivial_radius() {
    let g = Gauge::new(unit_disk()).unwrap();
    assert_eq!(jung_cover_three(&g, 1.0).unwrap(), [Point2::ORIGIN; 3]);
}

#[test]
fn euclidean_jung_cover_is_equilateral() {
    let g = Gauge::new(unit_disk()).unwrap();
    let j = 2.0 / S3;
    let c = jung_cover_three(&g, j).unwrap();
    assert!(dense_cover_check(&g, j, &c));
    let sides = [c[0].distance(c[1]), c[1].distance(c[2]), c[2].distance(c[0])];
    assert!((sides[0] - sides[1]).abs() < 1e-6 && (sides[1] - sides[2]).abs() < 1e-6);
}

#[test]
fn polygon_jung_cover_verifies() {
    let hex = difference_gauge(&ConvexBody::Polygon(
        Polygon::new((0..6).map(|i| Point2::from_angle(TAU_F * i as f64 / 6.0)).collect()).unwrap(),
    ));
    let j = jung_radius(&hex).j;
    let c = jung_cover_three(&hex, j).unwrap();
    assert!(dense_cover_check(&hex, j, &c));
}

#[test]
fn colorful_route_on_coincident_translates_uses_one_point() {
    let inst = disks(&[&[(0.4, 0.1)], &[(0.4, 0.1)], &[(0.4, 0.1)]]);
    let cert = colorful_jung_pierce(&inst).unwrap();
    assert_eq!(cert.family_index, 0);
    assert_eq!(cert.points, vec![Point2::new(0.4, 0.1)]);
}

#[test]
fn both_routes_certify_the_disk_example() {
    let inst = disks(&[&[(0.0, 0.0)], &[(2.0, 0.0)], &[(1.0, 1.0)]]);
    assert!(check_certificate(&inst, &symmetric_pierce(&inst).unwrap()));
    assert!(check_certificate(&inst, &colorful_jung_pierce(&inst).unwrap()));
}

#[test]
fn steep_best_pair_takes_crossing_on_the_side_of_p() {
    let inst = generate_instance(
        1924805494710074686,
        &GenSpec::new(BodyKind::RandomSymmetric, vec![5, 6, 2], 1.8164186609669997),
    )
    .unwrap();
    let c = symmetric_construction(&inst).unwrap();
    assert!(crate::geometry::orient(c.x1, c.x2, c.p) * crate::geometry::orient(c.x1, c.x2, c.q) > 0.0);
    assert!(claim_violations(&inst, &c).unwrap().is_empty());
    assert!(check_certificate(&inst, &symmetric_pierce(&inst).unwrap()));
}

fn symmetric_kind() -> impl Strategy<Value = BodyKind> {
    prop_oneof![
        Just(BodyKind::Disk),
        Just(BodyKind::Square),
        Just(BodyKind::RegularPolygon(6)),
        Just(BodyKind::RegularPolygon(8)),
        Just(BodyKind::RandomSymmetric),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn both_routes_certify_fuzzed_instances(
        seed in any::<u64>(),
        kind in symmetric_kind(),
        sizes in prop::collection::vec(1usize..=8, 3),
        spread in 0.5f64..3.0,
    ) {
        let inst = generate_instance(seed, &GenSpec::new(kind, sizes, spread)).unwrap();
        let c = symmetric_construction(&inst).unwrap();
        prop_assert!(claim_violations(&inst, &c).unwrap().is_empty());
        prop_assert!((inst.gauge().distance(c.x1, c.q) - 2.0).abs() < 1e-7 || c.x1.distance(c.x2) < 1e-9);
        for cert in [symmetric_pierce(&inst).unwrap(), colorful_jung_pierce(&inst).unwrap()] {
            prop_assert!(cert.points.len() <= 3);
            let report = verify_theorem(&inst, &cert);
            prop_assert!(report.ok, "{:?}", report);
        }
    }
}
