use num_traits::{One, Signed};

use crate::combin::Combinations;
use crate::ellipsoid::Ellipsoid;
use crate::error::{GeomError, Result};
use crate::geom::{affine_rank, contains_ellipsoid, convex_hull, hull_weights, Point};
use crate::linalg::dot;
use crate::num::{binomial, int, Rational};
use crate::par;

const EXHAUSTIVE_POINTS: usize = 16;

/// Radius `1/(5d^2)` of the ball every reduced hull must contain.
pub fn steinitz_radius(d: usize) -> Rational {
    Rational::new(1.into(), (5 * d * d).into())
}

/// Whether the hull of `points` contains the origin-centred ball of the
/// given radius.
pub fn hull_contains_ball(points: &[Point], radius: &Rational) -> bool {
    let Some(d) = points.first().map(Point::dim) else {
        return false;
    };
    let Ok(hull) = convex_hull(points) else {
        return false;
    };
    let ball = Ellipsoid::ball(vec![int(0); d], radius.clone()).expect("positive radius");
    contains_ellipsoid(&hull.hrep, &ball)
}

/// At most `2d` of the points whose hull still contains the ball of radius
/// `1/(5d^2)`, given that the hull of all points contains the unit ball.
/// Small inputs are searched exhaustively in lexicographic order; larger
/// ones are built greedily and checked exactly.
pub fn steinitz_reduce(points: &[Point]) -> Result<Vec<usize>> {
    let d = Point::check_dims(points)?;
    if !hull_contains_ball(points, &Rational::one()) {
        return Err(GeomError::PreconditionFailed("hull does not contain the unit ball".into()));
    }
    let n = points.len();
    if n <= 2 * d {
        return Ok((0..n).collect());
    }
    let radius = steinitz_radius(d);
    let check = |s: &[usize]| {
        let sub: Vec<Point> = s.iter().map(|&i| points[i].clone()).collect();
        hull_contains_ball(&sub, &radius)
    };
    if n > EXHAUSTIVE_POINTS {
        let greedy = greedy_subset(points, 2 * d);
        if check(&greedy) {
            return Ok(greedy);
        }
        if binomial(n, 2 * d) > crate::tverberg::EXHAUSTIVE_LIMIT {
            return Err(GeomError::NotFound("greedy reduction failed the ball check".into()));
        }
    }
    let subsets: Vec<Vec<usize>> = Combinations::new(n, 2 * d).collect();
    par::find_first(subsets.len(), |i| check(&subsets[i]).then(|| subsets[i].clone()))
        .ok_or_else(|| GeomError::NotFound("no 2d-subset contains the reduced ball".into()))
}

/// Squared distance from the origin to the hull boundary, negative when the
/// origin is outside, `None` when the hull is lower-dimensional.
fn inner_radius_sq(points: &[Point]) -> Option<Rational> {
    let hull = convex_hull(points).ok()?;
    hull.hrep
        .halfspaces
        .iter()
        .map(|h| {
            let r = &h.offset * &h.offset / dot(&h.normal, &h.normal);
            if h.offset.is_negative() {
                -r
            } else {
                r
            }
        })
        .min()
}

fn greedy_subset(points: &[Point], size: usize) -> Vec<usize> {
    let d = points[0].dim();
    // Seed with the support of a basic solution expressing the origin.
    let mut chosen: Vec<usize> = hull_weights(&Point::origin(d), points)
        .map(|w| w.iter().enumerate().filter(|(_, x)| x.is_positive()).map(|(i, _)| i).collect())
        .unwrap_or_default();
    chosen.truncate(size);
    while chosen.len() < size {
        let rank = |s: &[usize]| affine_rank(&s.iter().map(|&i| points[i].clone()).collect::<Vec<_>>());
        let scored = par::map_range(points.len(), |i| {
            if chosen.contains(&i) {
                return None;
            }
            let mut s = chosen.clone();
            s.push(i);
            let sub: Vec<Point> = s.iter().map(|&j| points[j].clone()).collect();
            Some((rank(&s), inner_radius_sq(&sub)))
        });
        let best = (0..points.len())
            .filter(|&i| scored[i].is_some())
            .max_by(|&a, &b| scored[a].cmp(&scored[b]).then_with(|| b.cmp(&a)));
        match best {
            Some(i) => chosen.push(i),
            None => break,
        }
    }
    chosen.sort_unstable();
    chosen
}
