//! Halving lines for sums of polygon areas.

use num_traits::{One, Zero};

use crate::error::{invalid, GeomError, Result};
use crate::geom::{ConvexBody, Hyperplane};
use crate::num::{abs, rationalize, to_f64, Rational};

/// Lines are rationalized with denominators up to this bound.
const LINE_DEN: u64 = 1_000_000_000_000;
const BISECTION_STEPS: usize = 200;
/// Accepted relative imbalance is `1 / HALVING_TOL`. Near a vertex of the
/// first measure the offset is ill-conditioned in the angle, and adjacent
/// doubles can differ by about `1e-9` of the mass.
const HALVING_TOL: u64 = 1_000_000;

/// A sum of Lebesgue measures restricted to convex bodies.
#[derive(Clone, Debug)]
pub struct MeasureFamily {
    pub bodies: Vec<ConvexBody>,
}

impl MeasureFamily {
    pub fn new(bodies: Vec<ConvexBody>) -> Result<Self> {
        if bodies.is_empty() || bodies.iter().any(|b| b.volume().is_zero()) {
            return Err(invalid("measure bodies must have positive volume"));
        }
        Ok(MeasureFamily { bodies })
    }

    pub fn total(&self) -> Rational {
        self.bodies.iter().map(ConvexBody::volume).sum()
    }

    /// Exact measure of the closed side `<a, x> <= b`.
    pub fn below(&self, h: &Hyperplane) -> Rational {
        self.bodies.iter().filter_map(|b| b.clip(&h.lower())).map(|b| b.volume()).sum()
    }

    /// `|mu(lower side) - mu(upper side)|`, exactly.
    pub fn imbalance(&self, h: &Hyperplane) -> Rational {
        let below = self.below(h);
        abs(&(Rational::from_integer(2.into()) * below - self.total()))
    }

    fn polygons(&self) -> Vec<Vec<[f64; 2]>> {
        self.bodies
            .iter()
            .map(|b| b.extreme_vertices().iter().map(|v| [to_f64(&v.0[0]), to_f64(&v.0[1])]).collect())
            .collect()
    }
}

/// Area of the convex polygon (counter-clockwise) on the side `<u, x> <= t`.
fn area_below(poly: &[[f64; 2]], u: [f64; 2], t: f64) -> f64 {
    let mut clipped: Vec<[f64; 2]> = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let sp = u[0] * p[0] + u[1] * p[1] - t;
        let sq = u[0] * q[0] + u[1] * q[1] - t;
        if sp <= 0.0 {
            clipped.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let s = sp / (sp - sq);
            clipped.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    }
    let m = clipped.len();
    (0..m)
        .map(|i| {
            let (a, b) = (clipped[i], clipped[(i + 1) % m]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

fn measure_below(polys: &[Vec<[f64; 2]>], u: [f64; 2], t: f64) -> f64 {
    polys.iter().map(|p| area_below(p, u, t)).sum()
}

/// Interval of offsets halving the measure in direction `u`.
fn halving_interval(polys: &[Vec<[f64; 2]>], u: [f64; 2]) -> (f64, f64) {
    let proj: Vec<f64> = polys.iter().flatten().map(|p| u[0] * p[0] + u[1] * p[1]).collect();
    let lo0 = proj.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi0 = proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let half = measure_below(polys, u, hi0) / 2.0;
    let search = |strict: bool| {
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let m = measure_below(polys, u, mid);
            if m < half || (!strict && m <= half) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    (search(true), search(false))
}

fn halving_offset(polys: &[Vec<[f64; 2]>], u: [f64; 2]) -> f64 {
    let (lo, hi) = halving_interval(polys, u);
    0.5 * (lo + hi)
}

/// Offset in `[lo, hi]` whose lower side carries half of the measure, or
/// the nearer endpoint when none does.
fn offset_within(polys: &[Vec<[f64; 2]>], u: [f64; 2], lo: f64, hi: f64) -> f64 {
    let half = measure_below(polys, u, f64::MAX) / 2.0;
    if measure_below(polys, u, lo) >= half {
        return lo;
    }
    if measure_below(polys, u, hi) <= half {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        if measure_below(polys, u, mid) < half {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn direction(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

/// A line halving both measures up to `10^{-6}` of their totals: for each
/// normal angle the first measure fixes the offset, and the second
/// measure's signed excess changes sign between `theta` and `theta + pi`,
/// so bisection in the angle finds a common halving line.
pub fn ham_sandwich_2d(mu1: &MeasureFamily, mu2: &MeasureFamily) -> Result<Hyperplane> {
    let dim = mu1.bodies[0].dim();
    if mu1.bodies.iter().chain(&mu2.bodies).any(|b| b.dim() != dim) {
        return Err(invalid("measures of mixed dimension"));
    }
    if dim != 2 {
        return Err(GeomError::Unsupported(format!("certified ham-sandwich cuts need d = 2, got {dim}")));
    }
    let (p1, p2) = (mu1.polygons(), mu2.polygons());
    let total2 = measure_below(&p2, [1.0, 0.0], f64::MAX);
    let excess = |theta: f64| {
        let u = direction(theta);
        measure_below(&p2, u, halving_offset(&p1, u)) - total2 / 2.0
    };
    let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
    let g0 = excess(lo);
    if g0 != 0.0 {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if (excess(mid) > 0.0) == (g0 > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let theta = if g0 == 0.0 { 0.0 } else { 0.5 * (lo + hi) };
    let u = direction(theta);
    let normal = vec![rationalize(u[0], LINE_DEN), rationalize(u[1], LINE_DEN)];
    let uf = [to_f64(&normal[0]), to_f64(&normal[1])];
    // Where the first measure has a gap, any offset inside it halves the
    // first measure; pick the one that also halves the second.
    let (lo1, hi1) = halving_interval(&p1, uf);
    let offset = rationalize(offset_within(&p2, uf, lo1, hi1), LINE_DEN);
    let line = Hyperplane::new(normal, offset)?;
    let tol = Rational::new(1.into(), HALVING_TOL.into());
    for mu in [mu1, mu2] {
        if mu.imbalance(&line) >= &tol * mu.total() {
            return Err(GeomError::HalvingDegenerate(format!(
                "exact imbalance {} exceeds tolerance",
                to_f64(&(mu.imbalance(&line) / mu.total()))
            )));
        }
    }
    Ok(line)
}

/// Exact halving point of a measure on the line: the measure below `t` is
/// piecewise linear in `t`, so the point is rational.
pub fn halving_point_1d(mu: &MeasureFamily) -> Result<Rational> {
    if mu.bodies.iter().any(|b| b.dim() != 1) {
        return Err(invalid("expected one-dimensional bodies"));
    }
    let intervals: Vec<(Rational, Rational)> = mu
        .bodies
        .iter()
        .map(|b| {
            let v = b.extreme_vertices();
            (v[0].0[0].clone().min(v[1].0[0].clone()), v[0].0[0].clone().max(v[1].0[0].clone()))
        })
        .collect();
    let mut breaks: Vec<Rational> = intervals.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    breaks.sort();
    breaks.dedup();
    let below = |t: &Rational| -> Rational {
        intervals
            .iter()
            .map(|(a, b)| {
                if t <= a {
                    Rational::zero()
                } else if t >= b {
                    b - a
                } else {
                    t - a
                }
            })
            .sum()
    };
    let half = mu.total() / Rational::from_integer(2.into());
    for w in breaks.windows(2) {
        let (f0, f1) = (below(&w[0]), below(&w[1]));
        if f1 >= half && f1 > f0 {
            // Linear on [w0, w1] with slope (f1 - f0) / (w1 - w0).
            let t = &w[0] + (&half - &f0) * (&w[1] - &w[0]) / (&f1 - &f0);
            return Ok(t);
        }
    }
    Err(GeomError::HalvingDegenerate("empty measure".into()))
}

/// Halving hyperplane for `d` measures in `R^d`, `d <= 2`.
pub fn halving_hyperplane(measures: &[MeasureFamily]) -> Result<Hyperplane> {
    match measures {
        [mu] => Hyperplane::new(vec![Rational::one()], halving_point_1d(mu)?),
        [a, b] => ham_sandwich_2d(a, b),
        _ => Err(GeomError::Unsupported(format!("halving {} measures", measures.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};
    use rand::{Rng, SeedableRng};

    fn square(cx: i64, cy: i64) -> ConvexBody {
        ConvexBody::cuboid(&[rat(2 * cx - 1, 2), rat(2 * cy - 1, 2)], &[rat(2 * cx + 1, 2), rat(2 * cy + 1, 2)])
    }

    #[test]
    fn symmetric_squares() {
        let a = MeasureFamily::new(vec![square(0, 0)]).unwrap();
        let b = MeasureFamily::new(vec![square(10, 0)]).unwrap();
        let line = ham_sandwich_2d(&a, &b).unwrap();
        assert!(a.imbalance(&line).is_zero() && b.imbalance(&line).is_zero());
        assert!(line.normal[0].is_zero());
        let c = MeasureFamily::new(vec![square(0, 10)]).unwrap();
        let line = ham_sandwich_2d(&a, &c).unwrap();
        assert!(line.normal[1].is_zero());
        assert!(a.imbalance(&line).is_zero() && c.imbalance(&line).is_zero());
    }

    #[test]
    fn random_hexagons_against_sampling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut poly = |cx: i64| {
            let pts: Vec<crate::geom::Point> = (0..6)
                .map(|k| {
                    let ang = k as f64 * std::f64::consts::PI / 3.0 + rng.random_range(0.0..0.4);
                    let r = rng.random_range(1.0..2.0);
                    crate::geom::Point::new(vec![
                        rationalize(cx as f64 + r * ang.cos(), 1000),
                        rationalize(r * ang.sin(), 1000),
                    ])
                })
                .collect();
            ConvexBody::new(pts).unwrap()
        };
        let a = MeasureFamily::new(vec![poly(0), poly(5)]).unwrap();
        let b = MeasureFamily::new(vec![poly(2), poly(-4)]).unwrap();
        let line = ham_sandwich_2d(&a, &b).unwrap();
        let tol = rat(1, 1_000_000_000);
        assert!(a.imbalance(&line) < &tol * a.total());
        assert!(b.imbalance(&line) < &tol * b.total());
        let flipped = Hyperplane::new(line.normal.iter().map(|x| -x).collect(), -line.offset.clone()).unwrap();
        assert!(b.imbalance(&flipped) < &tol * b.total());
        // Monte Carlo cross-check of the first measure's split.
        let mut below = 0usize;
        let mut inside = 0usize;
        let uf = [to_f64(&line.normal[0]), to_f64(&line.normal[1])];
        let t = to_f64(&line.offset);
        for _ in 0..200_000 {
            let p = [rng.random_range(-3.0..8.0), rng.random_range(-3.0..3.0)];
            let q = crate::geom::Point::new(vec![rationalize(p[0], 1 << 20), rationalize(p[1], 1 << 20)]);
            if a.bodies.iter().any(|b| b.contains(&q)) {
                inside += 1;
                if uf[0] * p[0] + uf[1] * p[1] <= t {
                    below += 1;
                }
            }
        }
        let frac = below as f64 / inside as f64;
        let sigma = (0.25 / inside as f64).sqrt();
        assert!((frac - 0.5).abs() < 4.0 * sigma, "{frac}");
    }

    #[test]
    fn median_on_the_line() {
        let seg = |a: i64, b: i64| {
            ConvexBody::new(vec![crate::geom::Point::from_i64(&[a]), crate::geom::Point::from_i64(&[b])]).unwrap()
        };
        let mu = MeasureFamily::new(vec![seg(0, 2), seg(5, 7)]).unwrap();
        assert_eq!(halving_point_1d(&mu).unwrap(), int(2));
        let mu = MeasureFamily::new(vec![seg(0, 4), seg(1, 3)]).unwrap();
        assert_eq!(halving_point_1d(&mu).unwrap(), int(2));
        let three = vec![square(0, 0).clone(); 3];
        let mu = MeasureFamily::new(three).unwrap();
        assert!(matches!(halving_hyperplane(&[mu.clone(), mu.clone(), mu]), Err(GeomError::Unsupported(_))));
    }
}
