//! Colorful Tverberg for segments with a lower bound on the width of the
//! common segment, via a common cap direction and lifting `[x, y] -> (x, y)`.

use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::points::{colorful_tverberg_points, TransversalSet};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{point_in_hull, Point};
use crate::linalg::dot;
use crate::num::{int, rational_above, rationalize, Rational};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a.dim() != b.dim() || a.dim() == 0 {
            return Err(invalid("segment endpoints must share a positive dimension"));
        }
        if a == b {
            return Err(invalid("segment endpoints must be distinct"));
        }
        Ok(Segment { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn delta(&self) -> Vec<Rational> {
        self.b.sub(&self.a)
    }

    pub fn length_sq(&self) -> Rational {
        let u = self.delta();
        dot(&u, &u)
    }

    /// `<v, b - a>`.
    pub fn width_along(&self, v: &[Rational]) -> Rational {
        dot(v, &self.delta())
    }
}

/// Solves `P(|<v, e>| <= delta) = 1/(5d)` for `v` uniform on the sphere.
/// In `d = 1` the sphere has two atoms and the equation has no solution;
/// the convention `4/5` is returned.
pub fn cap_threshold(d: usize) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    if d == 1 {
        return 0.8;
    }
    if d == 2 {
        return (std::f64::consts::PI / 20.0).sin();
    }
    // P(|t| <= sin phi) = I(phi) / I(pi/2), I(phi) = int_0^phi cos^{d-2}.
    let integral = |phi: f64| {
        let steps = 4000;
        let h = phi / steps as f64;
        let f = |t: f64| t.cos().powi(d as i32 - 2);
        let mut s = f(0.0) + f(phi);
        for k in 1..steps {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        s * h / 3.0
    };
    let total = integral(std::f64::consts::FRAC_PI_2);
    let target = 1.0 / (5.0 * d as f64);
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if integral(mid) / total < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).sin()
}

/// Rational threshold just above `delta_d (1 - 1e-6)` and below `delta_d`.
pub fn threshold_rational(d: usize) -> Rational {
    rational_above(cap_threshold(d) * (1.0 - 1e-6), 1_000_000_000_000)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapWitness {
    /// Exact unit vector.
    pub direction: Vec<Rational>,
    pub threshold: Rational,
    /// Indices per family of segments with `|<v, b - a>| >= threshold`.
    pub covered: Vec<Vec<usize>>,
}

impl CapWitness {
    pub fn covered_counts(&self) -> Vec<usize> {
        self.covered.iter().map(Vec::len).collect()
    }
}

/// Exact rational point of the unit sphere near the float unit vector `v`,
/// via inverse stereographic projection of rationalized coordinates.
pub fn rational_unit_vector(v: &[f64]) -> Vec<Rational> {
    let d = v.len();
    if d == 1 {
        return vec![if v[0] < 0.0 { -Rational::one() } else { Rational::one() }];
    }
    let last = v[d - 1];
    let from_north = last <= 0.0;
    let den = if from_north { 1.0 - last } else { 1.0 + last };
    let u: Vec<Rational> = v[..d - 1].iter().map(|x| rationalize(x / den, 1_000_000)).collect();
    let s: Rational = u.iter().map(|x| x * x).sum();
    let q = Rational::one() + &s;
    let mut out: Vec<Rational> = u.iter().map(|x| int(2) * x / &q).collect();
    out.push(if from_north { (&s - Rational::one()) / q } else { (Rational::one() - &s) / q });
    out
}

pub(crate) fn random_direction<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn check_direction(families: &[Vec<Segment>], v: Vec<Rational>, threshold: &Rational) -> Option<CapWitness> {
    let t2 = threshold * threshold;
    let mut covered = Vec::with_capacity(families.len());
    for f in families {
        let c: Vec<usize> = (0..f.len())
            .filter(|&i| {
                let w = f[i].width_along(&v);
                &w * &w >= t2
            })
            .collect();
        if 2 * c.len() < f.len() {
            return None;
        }
        covered.push(c);
    }
    Some(CapWitness { direction: v, threshold: threshold.clone(), covered })
}

pub const DIRECTION_SAMPLES: usize = 100_000;

/// Rejection sampling of directions covered by at least half of every
/// family's caps.
pub fn common_direction(families: &[Vec<Segment>], seed: u64) -> Result<CapWitness> {
    DirectionSampler::new(families, seed)?.next_witness()
}

struct DirectionSampler<'a> {
    families: &'a [Vec<Segment>],
    d: usize,
    threshold: Rational,
    rng: rand_chacha::ChaCha8Rng,
    drawn: usize,
}

impl<'a> DirectionSampler<'a> {
    fn new(families: &'a [Vec<Segment>], seed: u64) -> Result<Self> {
        let d = families
            .iter()
            .flatten()
            .next()
            .ok_or_else(|| invalid("no segments"))?
            .dim();
        if families.iter().flatten().any(|s| s.dim() != d) {
            return Err(invalid("segments of mixed dimension"));
        }
        Ok(DirectionSampler { families, d, threshold: threshold_rational(d), rng: rng::stream(seed, "cap-direction"), drawn: 0 })
    }

    fn next_witness(&mut self) -> Result<CapWitness> {
        while self.drawn < DIRECTION_SAMPLES {
            self.drawn += 1;
            let v = rational_unit_vector(&random_direction(self.d, &mut self.rng));
            if let Some(w) = check_direction(self.families, v, &self.threshold) {
                return Ok(w);
            }
        }
        Err(GeomError::SearchExhausted { samples: self.drawn })
    }
}

#[derive(Clone, Debug)]
pub struct SegmentTverberg {
    /// Indices refer to the input families.
    pub transversals: TransversalSet,
    pub witness: Segment,
    pub cap: CapWitness,
}

/// Covered segments oriented along `v` and shrunk about their midpoints to
/// `v`-width exactly `threshold`.
fn truncate(seg: &Segment, v: &[Rational], threshold: &Rational) -> Segment {
    let w = seg.width_along(v);
    let (a, b, w) = if w.is_negative() { (&seg.b, &seg.a, -w) } else { (&seg.a, &seg.b, w) };
    let f = threshold / w;
    let half: Vec<Rational> = b.sub(a).iter().map(|x| x * &f / int(2)).collect();
    let mid: Vec<Rational> = a.0.iter().zip(&b.0).map(|(x, y)| (x + y) / int(2)).collect();
    Segment {
        a: Point(mid.iter().zip(&half).map(|(m, h)| m - h).collect()),
        b: Point(mid.iter().zip(&half).map(|(m, h)| m + h).collect()),
    }
}

/// Maximum number of accepted directions tried before giving up.
const DIRECTION_ATTEMPTS: usize = 64;

pub fn colorful_tverberg_segments(families: &[Vec<Segment>], r: usize, seed: u64) -> Result<SegmentTverberg> {
    if r == 0 {
        return Err(invalid("r must be positive"));
    }
    let mut sampler = DirectionSampler::new(families, seed)?;
    let mut last_err = GeomError::NotFound("no direction admitted a colorful partition".into());
    for _ in 0..DIRECTION_ATTEMPTS {
        let cap = sampler.next_witness()?;
        let classes: Vec<Vec<Point>> = cap
            .covered
            .iter()
            .zip(families)
            .map(|(ix, f)| {
                ix.iter()
                    .map(|&i| {
                        let t = truncate(&f[i], &cap.direction, &cap.threshold);
                        let mut c = t.a.0.clone();
                        c.extend(t.b.0);
                        Point(c)
                    })
                    .collect()
            })
            .collect();
        match colorful_tverberg_points(&classes, r) {
            Ok((ts, x)) => {
                let d = sampler.d;
                let witness = Segment::new(Point(x.0[..d].to_vec()), Point(x.0[d..].to_vec()))?;
                let transversals: Vec<Vec<usize>> =
                    ts.transversals.iter().map(|t| t.iter().enumerate().map(|(j, &e)| cap.covered[j][e]).collect()).collect();
                let ts = TransversalSet { transversals, family_subset: None };
                if !segment_certificate_holds(families, &ts, &witness) {
                    return Err(GeomError::OptimizerFailed("segment witness failed exact containment".into()));
                }
                return Ok(SegmentTverberg { transversals: ts, witness, cap });
            }
            Err(e @ GeomError::NotFound(_)) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

/// Both endpoints of the witness lie in the hull of every transversal's
/// segment endpoints.
pub fn segment_certificate_holds(families: &[Vec<Segment>], ts: &TransversalSet, witness: &Segment) -> bool {
    ts.is_disjoint()
        && ts.transversals.iter().all(|t| {
            let pts: Vec<Point> =
                t.iter().enumerate().flat_map(|(j, &e)| [families[j][e].a.clone(), families[j][e].b.clone()]).collect();
            point_in_hull(&witness.a, &pts) && point_in_hull(&witness.b, &pts)
        })
}

/// `v`-width of the witness is at least the threshold and `|v| = 1`.
pub fn width_certificate_holds(cap: &CapWitness, witness: &Segment) -> bool {
    dot(&cap.direction, &cap.direction) == Rational::one() && witness.width_along(&cap.direction) >= cap.threshold
        && !cap.threshold.is_zero()
}
