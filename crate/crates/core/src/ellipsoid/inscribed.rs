//! Polytopes with rational vertices on the unit sphere, used to replace
//! ellipsoids inside hull computations. Each comes with a rational factor
//! `s` such that `s B^d` is certified to lie in the polytope.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::Ellipsoid;
use crate::error::{GeomError, Result};
use crate::geom::{contains_ellipsoid, convex_hull, Point};
use crate::linalg::dot;
use crate::num::{int, rational_below, rationalize, to_f64, Rational};

#[derive(Debug)]
pub struct BallPolytope {
    pub points: Vec<Point>,
    pub factor: Rational,
}

const MAX_DIM: usize = 7;

pub fn unit_ball_polytope(d: usize) -> Result<&'static BallPolytope> {
    static CACHE: [OnceLock<BallPolytope>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];
    if d == 0 || d > MAX_DIM {
        return Err(GeomError::Unsupported(format!("inscribed ball polytope in dimension {d}")));
    }
    Ok(CACHE[d].get_or_init(|| build(d)))
}

/// Image of the ball polytope under the ellipsoid's affine map.
pub fn ellipsoid_polytope(e: &Ellipsoid, ball: &BallPolytope) -> Vec<Point> {
    ball.points
        .iter()
        .map(|p| Point(e.shape().iter().zip(e.center()).map(|(row, c)| dot(row, &p.0) + c).collect()))
        .collect()
}

fn build(d: usize) -> BallPolytope {
    let points = match d {
        1 => vec![Point::from_i64(&[1]), Point::from_i64(&[-1])],
        2 => circle_points(),
        3 => sphere_points(),
        _ => {
            let mut pts = Vec::new();
            for i in 0..d {
                for s in [1, -1] {
                    let mut c = vec![0; d];
                    c[i] = s;
                    pts.push(Point::from_i64(&c));
                }
            }
            pts
        }
    };
    let hull = convex_hull(&points).expect("ball polytope is full-dimensional");
    let inradius = hull
        .hrep
        .halfspaces
        .iter()
        .map(|h| to_f64(&h.offset) / h.normal.iter().map(|a| to_f64(a).powi(2)).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min);
    let mut guess = inradius * (1.0 - 1e-9);
    loop {
        let factor = if d == 1 { Rational::one() } else { rational_below(guess, 1_000_000) };
        let ball = Ellipsoid::ball(vec![Rational::zero(); d], factor.clone()).unwrap();
        if contains_ellipsoid(&hull.hrep, &ball) {
            return BallPolytope { points: hull.vertices, factor };
        }
        guess *= 1.0 - 1e-6;
    }
}

/// 64 rational points on the unit circle at angles close to `2 pi k / 64`.
fn circle_points() -> Vec<Point> {
    let mut pts = Vec::with_capacity(64);
    let quarter: Vec<(Rational, Rational)> = (0..16)
        .map(|k| {
            let t = rationalize((std::f64::consts::PI * k as f64 / 64.0).tan(), 1_000_000);
            let den = Rational::one() + &t * &t;
            ((Rational::one() - &t * &t) / &den, int(2) * &t / den)
        })
        .collect();
    for rot in 0..4 {
        for (x, y) in &quarter {
            let (x, y) = match rot {
                0 => (x.clone(), y.clone()),
                1 => (-y.clone(), x.clone()),
                2 => (-x.clone(), -y.clone()),
                _ => (y.clone(), -x.clone()),
            };
            pts.push(Point(vec![x, y]));
        }
    }
    pts
}

/// Twice-subdivided icosahedron, vertices moved onto the sphere through
/// rational stereographic coordinates.
fn sphere_points() -> Vec<Point> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = vec![
        [-1.0, phi, 0.0], [1.0, phi, 0.0], [-1.0, -phi, 0.0], [1.0, -phi, 0.0],
        [0.0, -1.0, phi], [0.0, 1.0, phi], [0.0, -1.0, -phi], [0.0, 1.0, -phi],
        [phi, 0.0, -1.0], [phi, 0.0, 1.0], [-phi, 0.0, -1.0], [-phi, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    let unit = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    for v in verts.iter_mut() {
        *v = unit(*v);
    }
    for _ in 0..2 {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(unit([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts
        .iter()
        .map(|&[x, y, z]| {
            let (north, den) = if z <= 0.0 { (true, 1.0 - z) } else { (false, 1.0 + z) };
            let u = rationalize(x / den, 1_000_000);
            let v = rationalize(y / den, 1_000_000);
            let s = &u * &u + &v * &v;
            let q = Rational::one() + &s;
            let w = if north { &s - Rational::one() } else { Rational::one() - &s };
            Point(vec![int(2) * u / &q, int(2) * v / &q, w / q])
        })
        .collect()
}
