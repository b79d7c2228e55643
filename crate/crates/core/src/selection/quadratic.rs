use std::collections::BTreeMap;

use rand::seq::index::sample;

use super::point_selection::{deepest_candidate, point_selection};
use super::witness::{finish, min_volume, optimizer_slack, SelectionWitness, Witness};
use super::SelectionOptions;
use crate::combin::Combinations;
use crate::ellipsoid::{decode, encode, john_ellipsoid, param_dim};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{ConvexBody, Point};
use crate::linalg::dot;
use crate::num::{binomial, int, pow, Rational};
use crate::tverberg::{random_direction, rational_unit_vector, Segment};
use crate::{par, rng};

/// Tuples used to score lifted depth; larger tuple spaces are sampled.
const DEPTH_TUPLES: u128 = 5_000;
/// Tuples whose lifted barycenters are tried as candidates.
const BARYCENTER_TUPLES: u128 = 64;
const DIRECTION_CANDIDATES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Volume,
    Diameter,
}

pub fn selection_quadratic(family: &[ConvexBody], mode: Mode) -> Result<SelectionWitness> {
    selection_quadratic_with(family, mode, &SelectionOptions::default())
}

/// Lifts every body to a point (its John ellipsoid, or its oriented
/// diameter segment) and looks for a deep point of the lifted cloud; the
/// decoded object lies in the hull of every tuple whose lifted simplex
/// contains the deep point.
pub fn selection_quadratic_with(family: &[ConvexBody], mode: Mode, opts: &SelectionOptions) -> Result<SelectionWitness> {
    let d = family.first().ok_or_else(|| invalid("empty family"))?.dim();
    if family.iter().any(|b| b.dim() != d) {
        return Err(invalid("bodies of mixed dimension"));
    }
    let default_size = match mode {
        Mode::Volume => param_dim(d) + 1,
        Mode::Diameter => 2 * d + 1,
    };
    let size = opts.tuple_size.unwrap_or(default_size);
    if family.len() < size.max(1) {
        return Err(GeomError::TooFewBodies { need: size, got: family.len() });
    }
    match mode {
        Mode::Volume => volume_mode(family, d, size, opts),
        Mode::Diameter => diameter_mode(family, d, size, opts),
    }
}

fn index_tuples(n: usize, size: usize, limit: u128, seed: u64, label: &str) -> Vec<Vec<usize>> {
    if binomial(n, size) <= limit {
        return Combinations::new(n, size).collect();
    }
    let mut rng = rng::stream(seed, label);
    let mut out: Vec<Vec<usize>> = (0..limit)
        .map(|_| {
            let mut t = sample(&mut rng, n, size).into_vec();
            t.sort_unstable();
            t
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn deep_lifted_point(lifted: &[Point], size: usize, opts: &SelectionOptions) -> (Point, usize) {
    let n = lifted.len();
    let dim = lifted[0].dim();
    if dim <= 2 && size == dim + 1 && n <= 12 {
        if let Ok(best) = point_selection(lifted) {
            return best;
        }
    }
    let mut candidates: Vec<Point> = lifted.to_vec();
    candidates.push(Point::centroid(lifted));
    for t in index_tuples(n, size, BARYCENTER_TUPLES, opts.seed, "selection-barycenter") {
        candidates.push(Point::centroid(&t.iter().map(|&i| lifted[i].clone()).collect::<Vec<_>>()));
    }
    candidates.sort();
    candidates.dedup();
    let tuples = index_tuples(n, size, DEPTH_TUPLES, opts.seed, "selection-depth");
    let (best, depth) = deepest_candidate(lifted, &candidates, &tuples);
    (candidates[best].clone(), depth)
}

fn volume_mode(family: &[ConvexBody], d: usize, size: usize, opts: &SelectionOptions) -> Result<SelectionWitness> {
    let johns = par::map(family, john_ellipsoid).into_iter().collect::<Result<Vec<_>>>()?;
    let lifted: Vec<Point> = johns.iter().map(encode).collect();
    let (deep, depth) = deep_lifted_point(&lifted, size, opts);
    let witness = decode(&deep, d)?;
    let floor = pow(&int(d as i64), d).recip() * min_volume(family) * optimizer_slack();
    if !witness.volume_at_least(&floor) {
        return Err(GeomError::OptimizerFailed("selected ellipsoid is below the volume floor".into()));
    }
    let mut bounds = BTreeMap::new();
    bounds.insert("volumeFloor".to_string(), floor);
    bounds.insert("witnessVolumeLower".to_string(), witness.volume_lower_bound());
    bounds.insert("liftedDepth".to_string(), int(depth as i64));
    finish(family, Witness::Ellipsoid(witness), size, bounds)
}

/// The lexicographically first pair of extreme vertices at maximum distance.
pub fn diameter_segment(body: &ConvexBody) -> Result<Segment> {
    let v = body.extreme_vertices();
    let mut best: Option<(Rational, usize, usize)> = None;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let diff = v[j].sub(&v[i]);
            let len = dot(&diff, &diff);
            if best.as_ref().is_none_or(|(l, _, _)| len > *l) {
                best = Some((len, i, j));
            }
        }
    }
    let (_, i, j) = best.ok_or_else(|| invalid("body has a single vertex"))?;
    Segment::new(v[i].clone(), v[j].clone())
}

fn diameter_mode(family: &[ConvexBody], d: usize, size: usize, opts: &SelectionOptions) -> Result<SelectionWitness> {
    let segs = family.iter().map(diameter_segment).collect::<Result<Vec<_>>>()?;
    let mut rng = rng::stream(opts.seed, "selection-direction");
    let mut dirs: Vec<Vec<Rational>> = (0..d)
        .map(|i| (0..d).map(|j| int((i == j) as i64)).collect())
        .collect();
    dirs.extend((0..DIRECTION_CANDIDATES).map(|_| rational_unit_vector(&random_direction(d, &mut rng))));
    let min_width = |v: &Vec<Rational>| segs.iter().map(|s| s.width_along(v)).min().unwrap();
    let widths = par::map(&dirs, min_width);
    let best = (0..dirs.len()).max_by(|&a, &b| widths[a].cmp(&widths[b]).then_with(|| b.cmp(&a))).unwrap();
    let (v, width_floor) = (&dirs[best], widths[best].clone());
    if width_floor <= int(0) {
        return Err(GeomError::NotFound("no direction gives every diameter positive width".into()));
    }
    let lifted: Vec<Point> = segs
        .iter()
        .map(|s| {
            let (a, b) = if dot(&s.delta(), v) >= int(0) { (&s.a, &s.b) } else { (&s.b, &s.a) };
            Point(a.0.iter().chain(&b.0).cloned().collect())
        })
        .collect();
    let (deep, depth) = deep_lifted_point(&lifted, size, opts);
    let witness = Segment::new(Point(deep.0[..d].to_vec()), Point(deep.0[d..].to_vec()))?;
    let width = dot(&witness.delta(), v);
    if width < width_floor {
        return Err(GeomError::OptimizerFailed("selected segment is below the width floor".into()));
    }
    let mut bounds = BTreeMap::new();
    bounds.insert("widthFloor".to_string(), width_floor);
    bounds.insert("witnessWidth".to_string(), width);
    bounds.insert("witnessLengthSq".to_string(), witness.length_sq());
    bounds.insert("liftedDepth".to_string(), int(depth as i64));
    finish(family, Witness::Segment(witness), size, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn square(x: Rational, y: Rational) -> ConvexBody {
        ConvexBody::cuboid(&[x.clone(), y.clone()], &[x + int(1), y + int(1)])
    }

    #[test]
    fn identical_squares_full_fraction() {
        let fam: Vec<ConvexBody> = (0..8).map(|_| square(int(0), int(0))).collect();
        let out = selection_quadratic(&fam, Mode::Volume).unwrap();
        assert_eq!(out.tuple_size, 6);
        assert_eq!(out.fraction, int(1));
        let Witness::Ellipsoid(e) = &out.witness else { panic!() };
        assert!(e.volume() > 0.78);
    }

    #[test]
    fn scattered_squares_positive_fraction() {
        let fam: Vec<ConvexBody> = (0..8).map(|i| square(rat(i * 3 % 8, 8), rat(i * 5 % 8, 8))).collect();
        let out = selection_quadratic(&fam, Mode::Volume).unwrap();
        assert!(out.fraction > int(0));
        assert_eq!(out.fraction, Rational::new((out.hit_tuples.len() as i64).into(), 28.into()));
        let Witness::Ellipsoid(e) = &out.witness else { panic!() };
        assert!(e.volume_at_least(&(rat(1, 4) * optimizer_slack())));
    }

    #[test]
    fn too_few_and_diameter() {
        let fam: Vec<ConvexBody> = (0..5).map(|i| square(int(i), int(0))).collect();
        assert!(matches!(selection_quadratic(&fam, Mode::Volume), Err(GeomError::TooFewBodies { need: 6, got: 5 })));
        let out = selection_quadratic(&fam, Mode::Diameter).unwrap();
        assert_eq!(out.tuple_size, 5);
        assert!(out.fraction > int(0));
        assert!(out.bounds["witnessWidth"] >= out.bounds["widthFloor"]);
    }
}
