use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use super::{convex_hull, Halfspace, Hull, Point};
use crate::error::{invalid, GeomError, Result};
use crate::linalg::{dot, rank, Matrix};
use crate::num::{int, Rational};

/// A convex polytope given by a vertex list; the hull is computed lazily
/// and cached.
pub struct ConvexBody {
    vertices: Vec<Point>,
    hull: OnceLock<Result<Hull>>,
}

impl Clone for ConvexBody {
    fn clone(&self) -> Self {
        let hull = OnceLock::new();
        if let Some(h) = self.hull.get() {
            let _ = hull.set(h.clone());
        }
        ConvexBody { vertices: self.vertices.clone(), hull }
    }
}

impl PartialEq for ConvexBody {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl fmt::Debug for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexBody").field("vertices", &self.vertices).finish()
    }
}

impl ConvexBody {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Point::check_dims(&vertices)?;
        Ok(ConvexBody { vertices, hull: OnceLock::new() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| Point::from_i64(r)).collect()).expect("valid vertex rows")
    }

    /// Axis-parallel box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
    pub fn cuboid(lo: &[Rational], hi: &[Rational]) -> Self {
        let d = lo.len();
        let vertices = (0..1usize << d)
            .map(|m| Point((0..d).map(|k| if m >> k & 1 == 1 { hi[k].clone() } else { lo[k].clone() }).collect()))
            .collect();
        ConvexBody { vertices, hull: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn hull(&self) -> Result<&Hull> {
        self.hull.get_or_init(|| convex_hull(&self.vertices)).as_ref().map_err(Clone::clone)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.hull().is_ok()
    }

    /// Extreme vertices if the hull is full-dimensional, else the raw list.
    pub fn extreme_vertices(&self) -> &[Point] {
        match self.hull() {
            Ok(h) => &h.vertices,
            Err(_) => &self.vertices,
        }
    }

    pub fn volume(&self) -> Rational {
        polytope_volume(self)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self.hull() {
            Ok(h) => h.hrep.contains(p),
            Err(_) => super::point_in_hull(p, &self.vertices),
        }
    }

    pub fn vertex_centroid(&self) -> Point {
        Point::centroid(self.extreme_vertices())
    }

    /// Image under `x -> m x + t`.
    pub fn affine_image(&self, m: &Matrix, t: &[Rational]) -> ConvexBody {
        let vertices = self
            .vertices
            .iter()
            .map(|p| Point(m.iter().zip(t).map(|(row, ti)| dot(row, &p.0) + ti).collect()))
            .collect();
        ConvexBody { vertices, hull: OnceLock::new() }
    }

    pub fn translate(&self, t: &[Rational]) -> ConvexBody {
        let vertices = self.vertices.iter().map(|p| p.add_vec(t)).collect();
        ConvexBody { vertices, hull: OnceLock::new() }
    }

    /// Homothety `x -> c + f (x - c)`.
    pub fn scale_about(&self, c: &Point, f: &Rational) -> ConvexBody {
        let vertices = self
            .vertices
            .iter()
            .map(|p| Point(p.0.iter().zip(&c.0).map(|(x, ci)| ci + f * (x - ci)).collect()))
            .collect();
        ConvexBody { vertices, hull: OnceLock::new() }
    }

    /// Intersection with a closed halfspace; `None` when the result is not
    /// full-dimensional.
    pub fn clip(&self, h: &Halfspace) -> Option<ConvexBody> {
        let hull = self.hull().ok()?;
        let slacks: Vec<Rational> = hull.vertices.iter().map(|v| h.slack(v)).collect();
        if slacks.iter().all(|s| !s.is_negative()) {
            return Some(self.clone());
        }
        if !slacks.iter().any(Signed::is_positive) {
            return None;
        }
        let mut out: BTreeSet<Point> = BTreeSet::new();
        for (v, s) in hull.vertices.iter().zip(&slacks) {
            if !s.is_negative() {
                out.insert(v.clone());
            }
        }
        for (i, j) in hull_edges(hull) {
            let (si, sj) = (&slacks[i], &slacks[j]);
            if (si.is_positive() && sj.is_negative()) || (si.is_negative() && sj.is_positive()) {
                let t = si / (si - sj);
                let (a, b) = (&hull.vertices[i], &hull.vertices[j]);
                out.insert(Point(a.0.iter().zip(&b.0).map(|(x, y)| x + &t * (y - x)).collect()));
            }
        }
        let body = ConvexBody::new(out.into_iter().collect()).ok()?;
        body.is_full_dimensional().then_some(body)
    }
}

/// Vertex pairs forming edges: their common tight facets have rank d-1.
pub(crate) fn hull_edges(hull: &Hull) -> Vec<(usize, usize)> {
    let d = hull.hrep.dim;
    let n = hull.vertices.len();
    if d == 1 {
        return vec![(0, 1)];
    }
    let mut tight: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (f, vs) in hull.facet_vertices.iter().enumerate() {
        for &v in vs {
            tight[v].push(f);
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let common: Vec<usize> = tight[i].iter().filter(|f| tight[j].contains(f)).copied().collect();
            if common.len() < d - 1 {
                continue;
            }
            if d == 2 {
                edges.push((i, j));
                continue;
            }
            let normals: Matrix = common.iter().map(|&f| hull.hrep.halfspaces[f].normal.clone()).collect();
            if rank(&normals) == d - 1 {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Exact volume; zero for bodies that are not full-dimensional.
pub fn polytope_volume(body: &ConvexBody) -> Rational {
    match body.hull() {
        Ok(h) => hull_volume(h),
        Err(_) => Rational::zero(),
    }
}

fn hull_volume(h: &Hull) -> Rational {
    let d = h.hrep.dim;
    let v = &h.vertices;
    match d {
        1 => &v[1].0[0] - &v[0].0[0],
        2 => {
            let n = v.len();
            let mut twice = Rational::zero();
            for i in 0..n {
                let (a, b) = (&v[i], &v[(i + 1) % n]);
                twice += &a.0[0] * &b.0[1] - &b.0[0] * &a.0[1];
            }
            twice / int(2)
        }
        _ => {
            // Sum of cones from the centroid over facets; each facet's area is
            // recovered from its coordinate projection.
            let c = Point::centroid(v);
            let mut total = Rational::zero();
            for (hs, vs) in h.hrep.halfspaces.iter().zip(&h.facet_vertices) {
                let height = hs.slack(&c);
                let j = (0..d).max_by(|&a, &b| hs.normal[a].abs().cmp(&hs.normal[b].abs())).unwrap();
                let proj: Vec<Point> = vs
                    .iter()
                    .map(|&i| Point(v[i].0.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()))
                    .collect();
                let area = match convex_hull(&proj) {
                    Ok(ph) => hull_volume(&ph),
                    Err(_) => Rational::zero(),
                };
                total += height * area / (int(d as i64) * hs.normal[j].abs());
            }
            total
        }
    }
}

/// Intersection of the hulls of all bodies, or `None` if it has empty
/// interior.
pub fn intersect_bodies(bodies: &[ConvexBody]) -> Result<Option<ConvexBody>> {
    let first = bodies.first().ok_or_else(|| invalid("no bodies to intersect"))?;
    let d = first.dim();
    if bodies.iter().any(|b| b.dim() != d) {
        return Err(invalid("bodies of mixed dimension"));
    }
    let mut cur = match first.hull() {
        Ok(h) => ConvexBody::new(h.vertices.clone())?,
        Err(GeomError::DegenerateHull { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    for b in &bodies[1..] {
        let h = match b.hull() {
            Ok(h) => h,
            Err(GeomError::DegenerateHull { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        for hs in &h.hrep.halfspaces {
            match cur.clip(hs) {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
    }
    // Canonical vertex list: the extreme points.
    let verts = cur.hull()?.vertices.clone();
    Ok(Some(ConvexBody::new(verts)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn square(x: Rational, y: Rational) -> ConvexBody {
        ConvexBody::cuboid(&[x.clone(), y.clone()], &[x + int(1), y + int(1)])
    }

    #[test]
    fn volumes() {
        assert_eq!(ConvexBody::from_i64(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]).volume(), int(1));
        assert_eq!(ConvexBody::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).volume(), rat(1, 2));
        assert_eq!(ConvexBody::from_i64(&[&[0, 0], &[1, 1], &[2, 2]]).volume(), int(0));
        let cube = ConvexBody::cuboid(&[int(0), int(0), int(0)], &[int(2), int(3), int(1)]);
        assert_eq!(cube.volume(), int(6));
        let simplex = ConvexBody::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(simplex.volume(), rat(1, 6));
        let s4 = ConvexBody::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(s4.volume(), rat(1, 24));
        assert_eq!(ConvexBody::from_i64(&[&[3], &[-1]]).volume(), int(4));
    }

    #[test]
    fn intersections() {
        let a = square(int(0), int(0));
        let b = square(rat(1, 2), int(0));
        let i = intersect_bodies(&[a.clone(), b]).unwrap().unwrap();
        assert_eq!(i.volume(), rat(1, 2));
        let far = square(int(5), int(5));
        assert!(intersect_bodies(&[a.clone(), far]).unwrap().is_none());
        let touching = square(int(1), int(0));
        assert!(intersect_bodies(&[a.clone(), touching]).unwrap().is_none());
        let same = intersect_bodies(&[a.clone(), a.clone()]).unwrap().unwrap();
        assert_eq!(same.vertices(), a.hull().unwrap().vertices.as_slice());
        let c1 = ConvexBody::cuboid(&[int(0), int(0), int(0)], &[int(2), int(2), int(2)]);
        let c2 = ConvexBody::cuboid(&[int(1), int(1), int(1)], &[int(3), int(3), int(3)]);
        assert_eq!(intersect_bodies(&[c1, c2]).unwrap().unwrap().volume(), int(1));
    }

    #[test]
    fn interior_point_leaves_volume_unchanged() {
        let tri = ConvexBody::from_i64(&[&[0, 0], &[4, 0], &[0, 4]]);
        let with = ConvexBody::from_i64(&[&[0, 0], &[4, 0], &[0, 4], &[1, 1]]);
        assert_eq!(tri.volume(), with.volume());
    }
}
