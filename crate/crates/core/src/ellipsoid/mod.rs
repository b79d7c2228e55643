//! Ellipsoids `A(B^d) + c` with symmetric positive-definite `A`, their
//! encoding as points of `R^{d(d+3)/2}`, and maximum-volume inscribed
//! ellipsoids of polytopes.

mod inscribed;
mod john;

pub use inscribed::{ellipsoid_polytope, unit_ball_polytope, BallPolytope};
pub use john::{john_ellipsoid, JohnOptions};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, GeomError, Result};
use crate::geom::{convex_hull, contains_ellipsoid, Point};
use crate::linalg::{det, identity, is_positive_definite, is_symmetric, Matrix};
use crate::num::{pow, to_f64, unit_ball_volume, unit_ball_volume_bounds, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ellipsoid {
    shape: Matrix,
    center: Vec<Rational>,
}

/// Number of coordinates of the parameter space for dimension `d`.
pub fn param_dim(d: usize) -> usize {
    d * (d + 3) / 2
}

impl Ellipsoid {
    pub fn new(shape: Matrix, center: Vec<Rational>) -> Result<Self> {
        let d = center.len();
        if d == 0 || shape.len() != d || !is_symmetric(&shape) {
            return Err(invalid("ellipsoid shape must be a symmetric d x d matrix"));
        }
        if !is_positive_definite(&shape) {
            return Err(GeomError::NotPositiveDefinite);
        }
        Ok(Ellipsoid { shape, center })
    }

    pub fn ball(center: Vec<Rational>, radius: Rational) -> Result<Self> {
        let d = center.len();
        let shape = identity(d).into_iter().map(|row| row.into_iter().map(|x| x * &radius).collect()).collect();
        Self::new(shape, center)
    }

    pub fn unit_ball(d: usize) -> Self {
        Ellipsoid { shape: identity(d), center: vec![Rational::zero(); d] }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn shape(&self) -> &Matrix {
        &self.shape
    }

    pub fn center(&self) -> &[Rational] {
        &self.center
    }

    pub fn center_point(&self) -> Point {
        Point(self.center.clone())
    }

    /// `det(A)`, i.e. the volume divided by the unit-ball volume.
    pub fn det(&self) -> Rational {
        det(&self.shape)
    }

    pub fn volume(&self) -> f64 {
        ellipsoid_volume(self)
    }

    /// Exact test `vol(self) >= target`, using a lower bound on the
    /// unit-ball volume.
    pub fn volume_at_least(&self, target: &Rational) -> bool {
        let (lo, _) = unit_ball_volume_bounds(self.dim());
        self.det() * lo >= *target
    }

    /// Exact lower bound on the volume.
    pub fn volume_lower_bound(&self) -> Rational {
        self.det() * unit_ball_volume_bounds(self.dim()).0
    }

    pub fn translated(&self, t: &[Rational]) -> Ellipsoid {
        Ellipsoid { shape: self.shape.clone(), center: self.center.iter().zip(t).map(|(a, b)| a + b).collect() }
    }
}

/// The affine map `x -> A^{-1}(x - c)` sending an ellipsoid to the unit
/// ball, with its inverse.
#[derive(Clone, Debug)]
pub struct UnitFrame {
    shape: Matrix,
    inverse: Matrix,
    center: Vec<Rational>,
}

impl UnitFrame {
    pub fn new(e: &Ellipsoid) -> Self {
        let inverse = crate::linalg::inverse(&e.shape).expect("positive definite shape is invertible");
        UnitFrame { shape: e.shape.clone(), inverse, center: e.center.clone() }
    }

    pub fn to_unit(&self, p: &Point) -> Point {
        Point(crate::linalg::mat_vec(&self.inverse, &p.sub(&Point(self.center.clone()))))
    }

    pub fn from_unit(&self, p: &Point) -> Point {
        Point(crate::linalg::mat_vec(&self.shape, &p.0)).add_vec(&self.center)
    }

    /// `|det A|`, the factor by which `from_unit` scales volumes.
    pub fn scale(&self) -> Rational {
        det(&self.shape).abs()
    }
}

pub fn encode(e: &Ellipsoid) -> Point {
    let d = e.dim();
    let mut coords = Vec::with_capacity(param_dim(d));
    for i in 0..d {
        for j in i..d {
            coords.push(e.shape[i][j].clone());
        }
    }
    coords.extend(e.center.iter().cloned());
    Point(coords)
}

pub fn decode(p: &Point, d: usize) -> Result<Ellipsoid> {
    if p.dim() != param_dim(d) {
        return Err(invalid(format!("parameter point has {} coordinates, expected {}", p.dim(), param_dim(d))));
    }
    let mut shape = vec![vec![Rational::zero(); d]; d];
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            shape[i][j] = p.0[k].clone();
            shape[j][i] = p.0[k].clone();
            k += 1;
        }
    }
    Ellipsoid::new(shape, p.0[k..].to_vec())
}

pub fn ellipsoid_volume(e: &Ellipsoid) -> f64 {
    to_f64(&e.det()) * unit_ball_volume(e.dim())
}

/// Decodes the convex combination of encoded ellipsoids.
pub fn combination_decode(points: &[Point], weights: &[Rational], d: usize) -> Result<Ellipsoid> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(invalid("need one weight per point"));
    }
    if weights.iter().any(Signed::is_negative) || weights.iter().sum::<Rational>() != Rational::one() {
        return Err(invalid("weights must be nonnegative and sum to 1"));
    }
    for p in points {
        decode(p, d)?;
    }
    let n = param_dim(d);
    let mut acc = vec![Rational::zero(); n];
    for (p, w) in points.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(&p.0) {
            *a += w * x;
        }
    }
    decode(&Point(acc), d)
}

/// Scales the shape by `factor`, keeping the center.
pub fn shrink(e: &Ellipsoid, factor: &Rational) -> Result<Ellipsoid> {
    if !factor.is_positive() || *factor > Rational::one() {
        return Err(invalid("shrink factor must lie in (0, 1]"));
    }
    Ok(Ellipsoid {
        shape: e.shape.iter().map(|row| row.iter().map(|x| x * factor).collect()).collect(),
        center: e.center.clone(),
    })
}

/// Exact check of `det(sum w_i A_i) >= prod det(A_i)^{w_i}`, after raising
/// both sides to the common denominator of the weights.
pub fn log_concavity_holds(es: &[Ellipsoid], weights: &[Rational]) -> Result<bool> {
    let d = es.first().ok_or_else(|| invalid("no ellipsoids"))?.dim();
    let pts: Vec<Point> = es.iter().map(encode).collect();
    let comb = combination_decode(&pts, weights, d)?;
    let q: BigInt = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let q_usize: usize = q.clone().try_into().map_err(|_| invalid("weight denominators too large"))?;
    let lhs = pow(&comb.det(), q_usize);
    let mut rhs = Rational::one();
    for (e, w) in es.iter().zip(weights) {
        let k: usize = (w * Rational::from_integer(q.clone())).to_integer().try_into().unwrap();
        rhs *= pow(&e.det(), k);
    }
    Ok(lhs >= rhs)
}

/// Certifies the covering property for a convex combination at the
/// polytope-approximation scale: the combination shrunk by the recorded
/// factor lies in the hull of the inscribed polytopes of the summands.
pub fn certify_combination(es: &[Ellipsoid], weights: &[Rational]) -> Result<bool> {
    let d = es.first().ok_or_else(|| invalid("no ellipsoids"))?.dim();
    let pts: Vec<Point> = es.iter().map(encode).collect();
    let comb = combination_decode(&pts, weights, d)?;
    let ball = unit_ball_polytope(d)?;
    let cloud: Vec<Point> = es.iter().flat_map(|e| ellipsoid_polytope(e, ball)).collect();
    let hull = convex_hull(&cloud)?;
    Ok(contains_ellipsoid(&hull.hrep, &shrink(&comb, &ball.factor)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn diag(a: i64, b: i64, c: [i64; 2]) -> Ellipsoid {
        Ellipsoid::new(vec![vec![int(a), int(0)], vec![int(0), int(b)]], vec![int(c[0]), int(c[1])]).unwrap()
    }

    #[test]
    fn encode_decode_examples() {
        assert_eq!(encode(&Ellipsoid::unit_ball(2)), Point::from_i64(&[1, 0, 1, 0, 0]));
        let e = Ellipsoid::new(vec![vec![int(2), int(0)], vec![int(0), int(3)]], vec![int(1), int(-1)]).unwrap();
        assert_eq!(encode(&e), Point::from_i64(&[2, 0, 3, 1, -1]));
        let seg = Ellipsoid::new(vec![vec![int(1)]], vec![int(1)]).unwrap();
        assert_eq!(encode(&seg), Point::from_i64(&[1, 1]));
        assert_eq!(decode(&Point::from_i64(&[1, 0, 1, 0, 0]), 2).unwrap(), Ellipsoid::unit_ball(2));
        assert_eq!(decode(&Point::from_i64(&[1, 2, 1, 0, 0]), 2), Err(GeomError::NotPositiveDefinite));
        assert!(decode(&Point::from_i64(&[1, 0, 1, 0]), 2).is_err());
    }

    #[test]
    fn volumes() {
        let pi = std::f64::consts::PI;
        assert!((Ellipsoid::unit_ball(2).volume() - pi).abs() < 1e-12);
        assert!((diag(2, 3, [0, 0]).volume() - 6.0 * pi).abs() < 1e-12);
        assert!((Ellipsoid::unit_ball(3).volume() - 4.0 * pi / 3.0).abs() < 1e-12);
        let half = shrink(&Ellipsoid::unit_ball(2), &rat(1, 2)).unwrap();
        assert_eq!(half, Ellipsoid::ball(vec![int(0), int(0)], rat(1, 2)).unwrap());
        assert_eq!(shrink(&half, &int(1)).unwrap(), half);
        assert!(shrink(&half, &int(2)).is_err());
    }

    #[test]
    fn combination_of_two_disks() {
        let a = diag(1, 1, [0, 0]);
        let b = diag(1, 1, [2, 0]);
        let w = [rat(1, 2), rat(1, 2)];
        let c = combination_decode(&[encode(&a), encode(&b)], &w, 2).unwrap();
        assert_eq!(c, diag(1, 1, [1, 0]));
        assert_eq!(combination_decode(&[encode(&a)], &[int(1)], 2).unwrap(), a);
        assert!(certify_combination(&[a.clone(), b.clone()], &w).unwrap());
        let skew = Ellipsoid::new(vec![vec![int(3), int(1)], vec![int(1), int(1)]], vec![int(-1), int(4)]).unwrap();
        let w3 = [rat(1, 3), rat(1, 6), rat(1, 2)];
        assert!(certify_combination(&[a.clone(), b.clone(), skew.clone()], &w3).unwrap());
        assert!(log_concavity_holds(&[a, b, skew], &w3).unwrap());
    }
}
