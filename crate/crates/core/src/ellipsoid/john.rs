//! Maximum-volume inscribed ellipsoid of a polytope: a floating-point
//! barrier method followed by rationalization and an exact containment
//! certificate.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use super::Ellipsoid;
use crate::error::{GeomError, Result};
use crate::geom::{contains_ellipsoid, ConvexBody, Point};
use crate::num::{int, pow, rat, rationalize, to_f64, Rational};

#[derive(Clone, Debug)]
pub struct JohnOptions {
    /// Cap on the total number of Newton steps.
    pub max_newton: usize,
    /// Stop once the barrier duality gap `m / t` falls below this.
    pub gap: f64,
    /// Denominator cap for rationalizing the float solution (in the
    /// normalized frame where the body has circumradius about 1).
    pub den_cap: u64,
    pub shrink_steps: usize,
}

impl Default for JohnOptions {
    fn default() -> Self {
        JohnOptions { max_newton: 500, gap: 1e-9, den_cap: 1_000_000, shrink_steps: 10 }
    }
}

/// Certified inscribed ellipsoid of (nearly) maximum volume.
pub fn john_ellipsoid(body: &ConvexBody) -> Result<Ellipsoid> {
    john_ellipsoid_with(body, &JohnOptions::default())
}

pub fn john_ellipsoid_with(body: &ConvexBody, opts: &JohnOptions) -> Result<Ellipsoid> {
    let hull = body.hull()?;
    let d = hull.hrep.dim;
    if d == 1 {
        let lo = &hull.vertices[0].0[0];
        let hi = &hull.vertices[1].0[0];
        return Ellipsoid::new(vec![vec![(hi - lo) / int(2)]], vec![(hi + lo) / int(2)]);
    }
    let c0 = Point::centroid(&hull.vertices);
    let radius = hull
        .vertices
        .iter()
        .map(|v| v.sub(&c0).iter().map(|x| to_f64(x).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let scale = rationalize(radius, opts.den_cap).max(rat(1, opts.den_cap as i64));
    let scale_f = to_f64(&scale);
    let facets: Vec<(DVector<f64>, f64)> = hull
        .hrep
        .halfspaces
        .iter()
        .map(|h| {
            let a = DVector::from_iterator(d, h.normal.iter().map(to_f64));
            let b = to_f64(&h.slack(&c0)) / scale_f;
            let n = a.norm();
            (a / n, b / n)
        })
        .collect();
    let (a_f, c_f) = optimize(d, &facets, opts);

    // Rationalize in a frame whose unit is the smallest semi-axis, so the
    // denominator cap bounds the error relative to the ellipsoid itself.
    // Each constraint then moves by at most about (d + sqrt d) / den_cap
    // of the smallest axis, which the pre-shrink absorbs.
    let axis = a_f.clone().symmetric_eigenvalues().min() * scale_f;
    let unit = rationalize(axis, opts.den_cap);
    let unit = if unit.is_zero() { rat(1, opts.den_cap as i64) } else { unit };
    let rel = scale_f / to_f64(&unit);
    let pre = 1.0 - 3.0 * (d as f64 + (d as f64).sqrt()) / opts.den_cap as f64;
    let mut shape = vec![vec![Rational::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let v = rationalize(a_f[(i, j)] * pre * rel, opts.den_cap) * &unit;
            shape[i][j] = v.clone();
            shape[j][i] = v;
        }
    }
    let center: Vec<Rational> =
        (0..d).map(|i| &c0.0[i] + rationalize(c_f[i] * rel, opts.den_cap) * &unit).collect();
    let mut e = Ellipsoid::new(shape, center)
        .map_err(|_| GeomError::OptimizerFailed("rationalized shape is not positive definite".into()))?;
    let step = Rational::one() - rat(1, 1_000_000);
    for _ in 0..=opts.shrink_steps {
        if contains_ellipsoid(&hull.hrep, &e) {
            let floor = body.volume() * pow(&rat(1, d as i64), d) * (Rational::one() - rat(1, 10_000));
            if !e.volume_at_least(&floor) {
                return Err(GeomError::OptimizerFailed("certified ellipsoid below the volume guarantee".into()));
            }
            return Ok(e);
        }
        e = super::shrink(&e, &step)?;
    }
    Err(GeomError::OptimizerFailed("containment could not be certified".into()))
}

/// Index pairs `(j, k)`, `j <= k`, of the symmetric shape coordinates.
fn sym_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..d {
        for k in j..d {
            out.push((j, k));
        }
    }
    out
}

struct Problem<'a> {
    d: usize,
    pairs: Vec<(usize, usize)>,
    facets: &'a [(DVector<f64>, f64)],
}

impl Problem<'_> {
    fn unpack(&self, x: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let d = self.d;
        let mut a = DMatrix::zeros(d, d);
        for (p, &(j, k)) in self.pairs.iter().enumerate() {
            a[(j, k)] = x[p];
            a[(k, j)] = x[p];
        }
        let c = DVector::from_iterator(d, (0..d).map(|i| x[self.pairs.len() + i]));
        (a, c)
    }

    /// `E_p a` for the symmetric basis matrix of pair `p`.
    fn basis_times(&self, p: usize, a: &DVector<f64>) -> DVector<f64> {
        let (j, k) = self.pairs[p];
        let mut v = DVector::zeros(self.d);
        if j == k {
            v[j] = a[j];
        } else {
            v[j] = a[k];
            v[k] = a[j];
        }
        v
    }

    fn value(&self, x: &DVector<f64>, t: f64) -> Option<f64> {
        let (a, c) = self.unpack(x);
        let chol = a.clone().cholesky()?;
        let logdet = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let mut f = -t * logdet;
        for (n, b) in self.facets {
            let g = b - n.dot(&c) - (&a * n).norm();
            if g <= 0.0 {
                return None;
            }
            f -= g.ln();
        }
        f.is_finite().then_some(f)
    }

    fn grad_hess(&self, x: &DVector<f64>, t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let d = self.d;
        let na = self.pairs.len();
        let nv = na + d;
        let (a, c) = self.unpack(x);
        let ainv = a.clone().try_inverse().expect("iterate stays positive definite");
        let mut grad = DVector::zeros(nv);
        let mut hess = DMatrix::zeros(nv, nv);
        let m: Vec<DMatrix<f64>> = self
            .pairs
            .iter()
            .map(|&(j, k)| {
                let mut e = DMatrix::zeros(d, d);
                e[(j, k)] = 1.0;
                e[(k, j)] = 1.0;
                &ainv * e
            })
            .collect();
        for p in 0..na {
            grad[p] -= t * m[p].trace();
            for q in 0..na {
                hess[(p, q)] += t * (&m[p] * &m[q]).trace();
            }
        }
        for (n, b) in self.facets {
            let u = &a * n;
            let norm = u.norm();
            let g = b - n.dot(&c) - norm;
            let ea: Vec<DVector<f64>> = (0..na).map(|p| self.basis_times(p, n)).collect();
            let ue: Vec<f64> = ea.iter().map(|v| u.dot(v)).collect();
            let mut dg = DVector::zeros(nv);
            for p in 0..na {
                dg[p] = -ue[p] / norm;
            }
            for i in 0..d {
                dg[na + i] = -n[i];
            }
            grad -= &dg / g;
            hess += &dg * dg.transpose() / (g * g);
            for p in 0..na {
                for q in 0..na {
                    let h = ea[p].dot(&ea[q]) / norm - ue[p] * ue[q] / norm.powi(3);
                    hess[(p, q)] += h / g;
                }
            }
        }
        (grad, hess)
    }
}

fn optimize(d: usize, facets: &[(DVector<f64>, f64)], opts: &JohnOptions) -> (DMatrix<f64>, DVector<f64>) {
    let pairs = sym_pairs(d);
    let na = pairs.len();
    let prob = Problem { d, pairs, facets };
    let inball = facets.iter().map(|f| f.1).fold(f64::INFINITY, f64::min);
    let mut x = DVector::zeros(na + d);
    for (p, &(j, k)) in prob.pairs.iter().enumerate() {
        if j == k {
            x[p] = 0.5 * inball;
        }
    }
    let m = facets.len() as f64;
    let mut t = 1.0;
    let mut steps = 0;
    while steps < opts.max_newton {
        let Some(f) = prob.value(&x, t) else { break };
        let (g, h) = prob.grad_hess(&x, t);
        let dx = match h.clone().cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => {
                let reg = &h + DMatrix::identity(h.nrows(), h.ncols()) * 1e-12 * h.norm().max(1.0);
                match reg.cholesky() {
                    Some(ch) => ch.solve(&(-&g)),
                    None => break,
                }
            }
        };
        steps += 1;
        let decrement = -g.dot(&dx);
        if decrement / 2.0 < 1e-10 {
            if m / t < opts.gap {
                break;
            }
            t *= 10.0;
            continue;
        }
        let mut step = 1.0;
        let mut moved = false;
        while step > 1e-14 {
            let cand = &x + &dx * step;
            if let Some(fc) = prob.value(&cand, t) {
                if fc <= f - 0.01 * step * decrement {
                    x = cand;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved {
            if m / t < opts.gap {
                break;
            }
            t *= 10.0;
        }
    }
    prob.unpack(&x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::unit_ball_volume;

    /// Grid-search oracle for the largest inscribed ellipse of a planar
    /// polygon, in floating point.
    fn grid_oracle(hrep: &crate::geom::HRep, bbox: [f64; 4], steps: usize) -> f64 {
        let hs: Vec<([f64; 2], f64)> = hrep
            .halfspaces
            .iter()
            .map(|h| ([to_f64(&h.normal[0]), to_f64(&h.normal[1])], to_f64(&h.offset)))
            .collect();
        let w = (bbox[1] - bbox[0]).max(bbox[3] - bbox[2]);
        let mut best = 0.0f64;
        let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / steps as f64;
        for ix in 0..=steps {
            for iy in 0..=steps {
                let (cx, cy) = (lin(bbox[0], bbox[1], ix), lin(bbox[2], bbox[3], iy));
                for i11 in 1..=steps {
                    for i22 in 1..=steps {
                        for i12 in 0..=steps {
                            let (a11, a22) = (lin(0.0, w / 2.0, i11), lin(0.0, w / 2.0, i22));
                            let a12 = lin(-w / 2.0, w / 2.0, i12);
                            let det = a11 * a22 - a12 * a12;
                            if det <= best {
                                continue;
                            }
                            let ok = hs.iter().all(|(n, b)| {
                                let u = [a11 * n[0] + a12 * n[1], a12 * n[0] + a22 * n[1]];
                                n[0] * cx + n[1] * cy + (u[0] * u[0] + u[1] * u[1]).sqrt() <= *b
                            });
                            if ok && det > 0.0 {
                                best = det;
                            }
                        }
                    }
                }
            }
        }
        best * std::f64::consts::PI
    }

    #[test]
    fn square_gives_unit_disk() {
        let sq = ConvexBody::cuboid(&[int(-1), int(-1)], &[int(1), int(1)]);
        let e = john_ellipsoid(&sq).unwrap();
        assert!(contains_ellipsoid(&sq.hull().unwrap().hrep, &e));
        assert!(e.volume() >= std::f64::consts::PI * (1.0 - 1e-4));
        for (x, want) in e.center().iter().zip([0.0, 0.0]) {
            assert!((to_f64(x) - want).abs() < 1e-5);
        }
    }

    #[test]
    fn triangle_matches_closed_form_and_grid_oracle() {
        let tri = ConvexBody::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]);
        let e = john_ellipsoid(&tri).unwrap();
        let closed = std::f64::consts::PI / (3.0 * 3f64.sqrt()) * 0.5;
        assert!(e.volume() >= closed * (1.0 - 1e-4) && e.volume() <= closed * (1.0 + 1e-9));
        let oracle = grid_oracle(&tri.hull().unwrap().hrep, [0.0, 1.0, 0.0, 1.0], 12);
        assert!(e.volume() >= oracle * (1.0 - 1e-4));
        assert!(e.volume() > 0.125);
    }

    #[test]
    fn polygon_close_to_disk() {
        let ball = super::super::unit_ball_polytope(2).unwrap();
        let body = ConvexBody::new(ball.points.clone()).unwrap();
        let e = john_ellipsoid(&body).unwrap();
        assert!(e.volume() >= 0.99 * std::f64::consts::PI);
    }

    #[test]
    fn three_dimensional_and_interval() {
        let cube = ConvexBody::cuboid(&[int(0), int(0), int(0)], &[int(2), int(2), int(2)]);
        let e = john_ellipsoid(&cube).unwrap();
        assert!(e.volume() >= unit_ball_volume(3) * (1.0 - 1e-4));
        let seg = ConvexBody::from_i64(&[&[0], &[2]]);
        let e = john_ellipsoid(&seg).unwrap();
        assert_eq!(e, Ellipsoid::new(vec![vec![int(1)]], vec![int(1)]).unwrap());
        let flat = ConvexBody::from_i64(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert!(matches!(john_ellipsoid(&flat), Err(GeomError::DegenerateHull { dim: 1 })));
    }

    #[test]
    fn skinny_body_still_certifies() {
        let thin = ConvexBody::from_i64(&[&[0, 0], &[100, 0], &[100, 1], &[0, 1]]);
        let e = john_ellipsoid(&thin).unwrap();
        assert!(e.volume() >= std::f64::consts::PI * 50.0 * 0.5 * 0.999);
    }
}
