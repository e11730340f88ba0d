//! Seeded generation of cross-intersecting instances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ColoredInstance, Family, InstanceError};
use crate::geometry::{convex_hull, difference_gauge, ConvexBody, Disk, Gauge, Point2, Polygon};

/// Shape of the generator body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BodyKind {
    /// Disk of diameter 1.
    Disk,
    /// Axis-parallel unit square.
    Square,
    /// Regular polygon with `n` vertices and circumradius 1/2.
    RegularPolygon(usize),
    /// Random centrally symmetric polygon.
    RandomSymmetric,
    /// Regular triangle of side 1.
    Triangle,
    /// Random non-degenerate triangle.
    RandomTriangle,
    /// Random convex polygon, generally not symmetric.
    RandomPolygon,
}

impl BodyKind {
    pub fn is_symmetric(self) -> bool {
        match self {
            BodyKind::Disk | BodyKind::Square | BodyKind::RandomSymmetric => true,
            BodyKind::RegularPolygon(n) => n % 2 == 0,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub body: BodyKind,
    /// Number of translates per color; the number of colors is `sizes.len()`.
    pub sizes: Vec<usize>,
    /// Radius, in the instance's own gauge, of the ball translation vectors
    /// are drawn from. Any spread up to 1 never rejects.
    pub spread: f64,
}

impl GenSpec {
    pub fn new(body: BodyKind, sizes: Vec<usize>, spread: f64) -> Self {
        Self { body, sizes, spread }
    }

    pub fn uniform(body: BodyKind, k: usize, size: usize, spread: f64) -> Self {
        Self::new(body, vec![size; k], spread)
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }
}

const STALL_LIMIT: usize = 64;
const ATTEMPT_LIMIT: usize = 4096;
const SHRINK: f64 = 0.8;

fn polygon(points: &[Point2]) -> ConvexBody {
    ConvexBody::Polygon(Polygon::new(points.to_vec()).expect("generated polygons are valid"))
}

fn regular(n: usize, radius: f64, phase: f64) -> Vec<Point2> {
    (0..n)
        .map(|i| Point2::from_angle(phase + std::f64::consts::TAU * i as f64 / n as f64) * radius)
        .collect()
}

/// Draws a generator body of the requested kind.
pub fn random_body<R: Rng + ?Sized>(kind: BodyKind, rng: &mut R) -> ConvexBody {
    match kind {
        BodyKind::Disk => ConvexBody::Disk(Disk::new(Point2::ORIGIN, 0.5).expect("positive radius")),
        BodyKind::Square => polygon(&[
            Point2::new(-0.5, -0.5),
            Point2::new(0.5, -0.5),
            Point2::new(0.5, 0.5),
            Point2::new(-0.5, 0.5),
        ]),
        BodyKind::RegularPolygon(n) => polygon(&regular(n.max(3), 0.5, std::f64::consts::FRAC_PI_2)),
        BodyKind::Triangle => polygon(&[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        ]),
        BodyKind::RandomSymmetric => loop {
            let n = rng.gen_range(2..=5);
            let mut pts = Vec::with_capacity(2 * n);
            for _ in 0..n {
                let p = Point2::from_angle(rng.gen_range(0.0..std::f64::consts::PI)) * rng.gen_range(0.2..0.7);
                pts.push(p);
                pts.push(-p);
            }
            if let Ok(p) = Polygon::new(convex_hull(&pts)) {
                if p.area() > 0.05 {
                    break ConvexBody::Polygon(p);
                }
            }
        },
        BodyKind::RandomTriangle => loop {
            let pts: Vec<Point2> = (0..3)
                .map(|_| Point2::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)))
                .collect();
            if let Ok(p) = Polygon::new(pts) {
                if p.area() > 0.08 {
                    break ConvexBody::Polygon(p);
                }
            }
        },
        BodyKind::RandomPolygon => loop {
            let n = rng.gen_range(4..=8);
            let pts: Vec<Point2> = (0..n)
                .map(|_| Point2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * rng.gen_range(0.3..0.7))
                .collect();
            if let Ok(p) = Polygon::new(convex_hull(&pts)) {
                if p.area() > 0.08 {
                    break ConvexBody::Polygon(p);
                }
            }
        },
    }
}

fn sample_in_ball<R: Rng + ?Sized>(rng: &mut R, gauge: &Gauge, radius: f64) -> Point2 {
    if radius <= 0.0 {
        return Point2::ORIGIN;
    }
    let r = radius * rng.gen::<f64>().sqrt();
    gauge.boundary_point(Point2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU))) * r
}

/// Builds a cross-intersecting instance deterministically from `seed`.
///
/// Translates are placed one color at a time in round-robin order. A
/// candidate is rejected when it sits at gauge distance more than 2 from a
/// placed translate of another color, or duplicates one of its own color.
/// After a run of rejections everything is discarded and placement restarts
/// with a smaller sampling radius.
pub fn generate_instance(seed: u64, spec: &GenSpec) -> Result<ColoredInstance, InstanceError> {
    if spec.sizes.len() < 2 {
        return Err(InstanceError::TooFewFamilies(spec.sizes.len()));
    }
    if let Some(f) = spec.sizes.iter().position(|&s| s == 0) {
        return Err(InstanceError::EmptyFamily(f));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generator = random_body(spec.body, &mut rng);
    let gauge = difference_gauge(&generator);
    let mut spread = spec.spread.max(0.0);
    let allow_duplicates = spread == 0.0;

    let mut families: Vec<Vec<Point2>> = vec![Vec::new(); spec.sizes.len()];
    let total: usize = spec.sizes.iter().sum();
    let mut placed = 0;
    let mut attempts = 0;
    let mut stall = 0;
    while placed < total {
        let f = (0..spec.sizes.len())
            .filter(|&f| families[f].len() < spec.sizes[f])
            .min_by_key(|&f| families[f].len())
            .expect("some family is incomplete");
        if attempts >= ATTEMPT_LIMIT {
            return Err(InstanceError::GenerationExhausted);
        }
        attempts += 1;
        let t = sample_in_ball(&mut rng, &gauge, spread);
        let clash = families.iter().enumerate().any(|(g, fam)| {
            if g == f {
                !allow_duplicates && fam.iter().any(|&s| s.distance(t) <= 1e-9)
            } else {
                fam.iter().any(|&s| gauge.distance(s, t) > 2.0)
            }
        });
        if clash {
            stall += 1;
            if stall >= STALL_LIMIT {
                spread *= SHRINK;
                stall = 0;
                families.iter_mut().for_each(Vec::clear);
                placed = 0;
            }
            continue;
        }
        stall = 0;
        families[f].push(t);
        placed += 1;
    }
    let families = families
        .into_iter()
        .enumerate()
        .map(|(i, translates)| Family { color: i as u32 + 1, translates })
        .collect();
    ColoredInstance::new(generator, families)
}
