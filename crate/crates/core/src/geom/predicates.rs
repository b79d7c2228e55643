use num_traits::{One, Signed, Zero};

use super::{HRep, Hyperplane, Point};
use crate::ellipsoid::Ellipsoid;
use crate::error::{invalid, Result};
use crate::linalg::{det, dot, mat_vec, rank, solve, Matrix};
use crate::lp::{Cmp, Lp};
use crate::num::{sign, Rational};

/// Sign of `det(x_1 - x_{d+1}, ..., x_d - x_{d+1})`.
pub fn orientation(points: &[Point]) -> Result<i8> {
    let d = Point::check_dims(points)?;
    if points.len() != d + 1 {
        return Err(invalid(format!("orientation needs {} points in dimension {d}, got {}", d + 1, points.len())));
    }
    let last = &points[d];
    let m: Matrix = points[..d].iter().map(|p| p.sub(last)).collect();
    Ok(sign(&det(&m)))
}

/// Dimension of the affine hull.
pub fn affine_rank(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Matrix = points[1..].iter().map(|p| p.sub(&points[0])).collect();
    rank(&diffs)
}

fn outside_bbox(p: &Point, pts: &[Point]) -> bool {
    (0..p.dim()).any(|k| pts.iter().all(|q| q.0[k] < p.0[k]) || pts.iter().all(|q| q.0[k] > p.0[k]))
}

/// Convex weights expressing `p` over `pts`, or `None` if `p` is outside
/// their hull.
pub fn hull_weights(p: &Point, pts: &[Point]) -> Option<Vec<Rational>> {
    if pts.is_empty() || outside_bbox(p, pts) {
        return None;
    }
    let d = p.dim();
    if pts.len() == 1 {
        return (pts[0] == *p).then(|| vec![Rational::one()]);
    }
    if pts.len() == d + 1 {
        // Barycentric solve when the points form a simplex.
        let m: Matrix = (0..=d)
            .map(|row| {
                (0..=d)
                    .map(|j| if row < d { pts[j].0[row].clone() } else { Rational::one() })
                    .collect()
            })
            .collect();
        let mut rhs = p.0.clone();
        rhs.push(Rational::one());
        if let Some(w) = solve(&m, &rhs) {
            return w.iter().all(|x| !x.is_negative()).then_some(w);
        }
    }
    let n = pts.len();
    let mut lp = Lp::new(n);
    lp.add(vec![Rational::one(); n], Cmp::Eq, Rational::one());
    for k in 0..d {
        lp.add(pts.iter().map(|q| q.0[k].clone()).collect(), Cmp::Eq, p.0[k].clone());
    }
    lp.solve()
}

pub fn point_in_hull(p: &Point, pts: &[Point]) -> bool {
    hull_weights(p, pts).is_some()
}

/// `[a, b]` is in the hull iff both endpoints are.
pub fn segment_in_hull(a: &Point, b: &Point, pts: &[Point]) -> bool {
    point_in_hull(a, pts) && point_in_hull(b, pts)
}

/// Exact test that the ellipsoid lies in every halfspace: with slack
/// `s = b - <a, c>` we need `s >= 0` and `s^2 >= |A a|^2`.
pub fn contains_ellipsoid(hrep: &HRep, e: &Ellipsoid) -> bool {
    if hrep.dim != e.dim() {
        return false;
    }
    hrep.halfspaces.iter().all(|h| {
        let s = &h.offset - dot(&h.normal, e.center());
        if s.is_negative() {
            return false;
        }
        let aa = mat_vec(e.shape(), &h.normal);
        let norm2 = dot(&aa, &aa);
        &s * &s >= norm2
    })
}

/// A hyperplane with `<a, x> < b` on every point of `left` and `> b` on
/// every point of `right`, found by exact LP with unit margin.
pub fn strict_separator(left: &[Point], right: &[Point]) -> Option<Hyperplane> {
    let d = left.first().or(right.first())?.dim();
    let mut lp = Lp::new(d + 1);
    for v in 0..=d {
        lp.set_free(v);
    }
    for p in left {
        let mut row = p.0.clone();
        row.push(-Rational::one());
        lp.add(row, Cmp::Le, -Rational::one());
    }
    for p in right {
        let mut row = p.0.clone();
        row.push(-Rational::one());
        lp.add(row, Cmp::Ge, Rational::one());
    }
    let sol = lp.solve()?;
    let normal = sol[..d].to_vec();
    if normal.iter().all(Zero::is_zero) {
        return None;
    }
    Hyperplane::new(normal, sol[d].clone()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn pts(c: &[&[i64]]) -> Vec<Point> {
        c.iter().map(|x| Point::from_i64(x)).collect()
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap(), 1);
        assert_eq!(orientation(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap(), 0);
        assert_eq!(orientation(&pts(&[&[0, 0], &[0, 1], &[1, 0]])).unwrap(), -1);
        assert!(orientation(&pts(&[&[0, 0], &[0, 1]])).is_err());
        assert!(orientation(&[Point::from_i64(&[0, 0]), Point::from_i64(&[1]), Point::from_i64(&[0, 1])]).is_err());
    }

    #[test]
    fn hull_membership() {
        let sq = pts(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2]]);
        assert!(point_in_hull(&Point::from_i64(&[1, 1]), &sq));
        assert!(point_in_hull(&Point::from_i64(&[2, 1]), &sq));
        assert!(!point_in_hull(&Point::from_i64(&[3, 1]), &sq));
        let p = Point::new(vec![rat(1, 3), rat(5, 3)]);
        let w = hull_weights(&p, &sq).unwrap();
        assert_eq!(w.iter().sum::<Rational>(), int(1));
        let tri = pts(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert!(!point_in_hull(&Point::from_i64(&[2, 2]), &tri));
        assert!(point_in_hull(&Point::from_i64(&[1, 1]), &tri));
    }

    #[test]
    fn separators() {
        let a = pts(&[&[0, 0], &[1, 0]]);
        let b = pts(&[&[0, 3], &[1, 3]]);
        let h = strict_separator(&a, &b).unwrap();
        assert!(a.iter().all(|p| h.side(p) < 0));
        assert!(b.iter().all(|p| h.side(p) > 0));
        let c = pts(&[&[0, 0], &[2, 2]]);
        let d = pts(&[&[0, 2], &[2, 0]]);
        assert!(strict_separator(&c, &d).is_none());
    }
}
