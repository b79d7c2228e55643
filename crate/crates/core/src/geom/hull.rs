use std::collections::{BTreeSet, HashSet};

use num_traits::{Signed, Zero};

use super::{affine_rank, Halfspace, HRep, Point};
use crate::error::{GeomError, Result};
use crate::linalg::{dot, nullspace, rank};
use crate::num::Rational;

/// Exact convex hull: facet halfspaces plus the extreme vertices.
///
/// In the plane the vertices are listed counter-clockwise starting from the
/// lexicographically smallest one; otherwise they are sorted
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    pub hrep: HRep,
    pub vertices: Vec<Point>,
    /// For each halfspace, the indices of the vertices lying on it.
    pub facet_vertices: Vec<Vec<usize>>,
}

pub fn convex_hull(points: &[Point]) -> Result<Hull> {
    let d = Point::check_dims(points)?;
    let rk = affine_rank(points);
    if rk < d {
        return Err(GeomError::DegenerateHull { dim: rk });
    }
    let pts: Vec<Point> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let (halfspaces, vertices) = match d {
        1 => hull_1d(&pts),
        2 => hull_2d(&pts),
        3 => {
            let hs = facets_3d(&pts);
            let vs = extreme_points(&pts, &hs, d);
            (hs, vs)
        }
        _ => {
            let hs = facets_bruteforce(&pts, d);
            let vs = extreme_points(&pts, &hs, d);
            (hs, vs)
        }
    };
    let facet_vertices = halfspaces
        .iter()
        .map(|h| (0..vertices.len()).filter(|&i| h.slack(&vertices[i]).is_zero()).collect())
        .collect();
    Ok(Hull { hrep: HRep { dim: d, halfspaces }, vertices, facet_vertices })
}

fn hull_1d(pts: &[Point]) -> (Vec<Halfspace>, Vec<Point>) {
    let lo = pts.first().unwrap().clone();
    let hi = pts.last().unwrap().clone();
    let one = Rational::from_integer(1.into());
    let hs = vec![
        Halfspace::new(vec![one.clone()], hi.0[0].clone()),
        Halfspace::new(vec![-one], -lo.0[0].clone()),
    ];
    (hs, vec![lo, hi])
}

fn cross2(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0[0] - &o.0[0]) * (&b.0[1] - &o.0[1]) - (&a.0[1] - &o.0[1]) * (&b.0[0] - &o.0[0])
}

/// Andrew's monotone chain on sorted, deduplicated points.
fn hull_2d(pts: &[Point]) -> (Vec<Halfspace>, Vec<Point>) {
    let mut lower: Vec<Point> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && !cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let verts = lower;
    let n = verts.len();
    let hs = (0..n)
        .map(|i| {
            let a = &verts[i];
            let b = &verts[(i + 1) % n];
            let normal = vec![&b.0[1] - &a.0[1], &a.0[0] - &b.0[0]];
            let offset = dot(&normal, &a.0);
            Halfspace::new(normal, offset).normalized()
        })
        .collect();
    (hs, verts)
}

fn cross3(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn face_plane(pts: &[Point], f: &[usize; 3]) -> (Vec<Rational>, Rational) {
    let n = cross3(&pts[f[1]].sub(&pts[f[0]]), &pts[f[2]].sub(&pts[f[0]]));
    let off = dot(&n, &pts[f[0]].0);
    (n, off)
}

/// Incremental 3-d hull over triangles; coplanar triangles are merged into
/// one facet halfspace at the end.
fn facets_3d(pts: &[Point]) -> Vec<Halfspace> {
    let p0 = 0;
    let p1 = (1..pts.len()).find(|&i| pts[i] != pts[p0]).unwrap();
    let e1 = pts[p1].sub(&pts[p0]);
    let p2 = (0..pts.len())
        .find(|&i| cross3(&e1, &pts[i].sub(&pts[p0])).iter().any(|x| !x.is_zero()))
        .unwrap();
    let nrm = cross3(&e1, &pts[p2].sub(&pts[p0]));
    let p3 = (0..pts.len()).find(|&i| !dot(&nrm, &pts[i].sub(&pts[p0])).is_zero()).unwrap();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let init = [p0, p1, p2, p3];
    for skip in 0..4 {
        let tri: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| init[k]).collect();
        let mut f = [tri[0], tri[1], tri[2]];
        let (n, off) = face_plane(pts, &f);
        if dot(&n, &pts[init[skip]].0) > off {
            f.swap(1, 2);
        }
        faces.push(f);
    }
    for p in 0..pts.len() {
        if init.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| {
                let (n, off) = face_plane(pts, f);
                dot(&n, &pts[p].0) > off
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut vis_edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                vis_edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> = Vec::new();
        for (f, &v) in faces.iter().zip(&visible) {
            if !v {
                next.push(*f);
            }
        }
        for &(u, w) in &vis_edges {
            if !vis_edges.contains(&(w, u)) {
                next.push([u, w, p]);
            }
        }
        faces = next;
    }
    let set: BTreeSet<Halfspace> = faces
        .iter()
        .map(|f| {
            let (n, off) = face_plane(pts, f);
            Halfspace::new(n, off).normalized()
        })
        .collect();
    set.into_iter().collect()
}

/// Supporting hyperplanes through every affinely independent d-subset.
fn facets_bruteforce(pts: &[Point], d: usize) -> Vec<Halfspace> {
    let mut set = BTreeSet::new();
    let n = pts.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let diffs: Vec<Vec<Rational>> = idx[1..].iter().map(|&i| pts[i].sub(&pts[idx[0]])).collect();
        let ns = nullspace(&diffs, d);
        if ns.len() == 1 {
            let normal = ns.into_iter().next().unwrap();
            let off = dot(&normal, &pts[idx[0]].0);
            let mut le = true;
            let mut ge = true;
            for p in pts {
                let v = dot(&normal, &p.0);
                if v > off {
                    le = false;
                }
                if v < off {
                    ge = false;
                }
                if !le && !ge {
                    break;
                }
            }
            if le {
                set.insert(Halfspace::new(normal.clone(), off.clone()).normalized());
            }
            if ge {
                set.insert(Halfspace::new(normal, off).flipped().normalized());
            }
        }
        // Next combination in lexicographic order.
        let mut i = d;
        loop {
            if i == 0 {
                return set.into_iter().collect();
            }
            i -= 1;
            if idx[i] != i + n - d {
                break;
            }
            if i == 0 {
                return set.into_iter().collect();
            }
        }
        idx[i] += 1;
        for j in i + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Points whose tight facet normals have full rank.
fn extreme_points(pts: &[Point], hs: &[Halfspace], d: usize) -> Vec<Point> {
    pts.iter()
        .filter(|p| {
            let tight: Vec<Vec<Rational>> =
                hs.iter().filter(|h| h.slack(p).is_zero()).map(|h| h.normal.clone()).collect();
            tight.len() >= d && rank(&tight) == d
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[&[i64]]) -> Vec<Point> {
        c.iter().map(|x| Point::from_i64(x)).collect()
    }

    #[test]
    fn square_and_interior_point() {
        let h = convex_hull(&pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])).unwrap();
        assert_eq!(h.hrep.halfspaces.len(), 4);
        assert_eq!(h.vertices.len(), 4);
        let h = convex_hull(&pts(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2], &[1, 1], &[1, 0]])).unwrap();
        assert_eq!(h.vertices, pts(&[&[0, 0], &[2, 0], &[2, 2], &[0, 2]]));
        assert_eq!(h.hrep.halfspaces.len(), 4);
    }

    #[test]
    fn collinear_is_degenerate() {
        let err = convex_hull(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap_err();
        assert_eq!(err, GeomError::DegenerateHull { dim: 1 });
    }

    #[test]
    fn cube_in_three_and_four_dimensions() {
        let mut cube = Vec::new();
        for m in 0..8 {
            cube.push(Point::from_i64(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]));
        }
        cube.push(Point::from_i64(&[0, 0, 0]));
        let mut with_face_centre = cube.clone();
        with_face_centre.push(Point::new(vec![crate::num::rat(1, 2), crate::num::rat(1, 2), crate::num::int(0)]));
        let h = convex_hull(&with_face_centre).unwrap();
        assert_eq!(h.hrep.halfspaces.len(), 6);
        assert_eq!(h.vertices.len(), 8);
        for fv in &h.facet_vertices {
            assert_eq!(fv.len(), 4);
        }
        let mut tess = Vec::new();
        for m in 0..16 {
            tess.push(Point::from_i64(&[m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1]));
        }
        let h = convex_hull(&tess).unwrap();
        assert_eq!(h.hrep.halfspaces.len(), 8);
        assert_eq!(h.vertices.len(), 16);
    }

    #[test]
    fn bruteforce_agrees_with_incremental_in_3d() {
        let p = pts(&[&[0, 0, 0], &[5, 1, 0], &[1, 4, 1], &[2, 2, 6], &[1, 1, 1], &[4, 4, 4], &[3, 0, 5]]);
        let mut a = facets_3d(&p);
        let mut b = facets_bruteforce(&p, 3);
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
