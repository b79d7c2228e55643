//! Tverberg-type statements for ellipsoids, obtained by running the point
//! versions on encoded ellipsoids.

use super::points::{colorful_tverberg_points, tverberg_points_with, Partition, Strategy, TransversalSet};
use crate::ellipsoid::{decode, ellipsoid_polytope, encode, shrink, unit_ball_polytope, Ellipsoid};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{contains_ellipsoid, convex_hull, Point};

/// Checks `shrink(witness, s)` against the hull of the inscribed polytopes
/// of every part, `s` being the recorded approximation factor.
pub fn certify_ellipsoid_parts(parts: &[Vec<Ellipsoid>], witness: &Ellipsoid) -> Result<bool> {
    let ball = unit_ball_polytope(witness.dim())?;
    let small = shrink(witness, &ball.factor)?;
    for part in parts {
        let cloud: Vec<Point> = part.iter().flat_map(|e| ellipsoid_polytope(e, ball)).collect();
        let hull = match convex_hull(&cloud) {
            Ok(h) => h,
            Err(GeomError::DegenerateHull { .. }) => return Ok(false),
            Err(e) => return Err(e),
        };
        if !contains_ellipsoid(&hull.hrep, &small) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dim_of(es: &[Ellipsoid]) -> Result<usize> {
    let d = es.first().ok_or_else(|| invalid("no ellipsoids"))?.dim();
    if es.iter().any(|e| e.dim() != d) {
        return Err(invalid("ellipsoids of mixed dimension"));
    }
    Ok(d)
}

pub fn tverberg_ellipsoids(es: &[Ellipsoid], r: usize) -> Result<(Partition, Ellipsoid)> {
    tverberg_ellipsoids_with(es, r, Strategy::Auto)
}

pub fn tverberg_ellipsoids_with(es: &[Ellipsoid], r: usize, strategy: Strategy) -> Result<(Partition, Ellipsoid)> {
    let d = dim_of(es)?;
    let lifted: Vec<Point> = es.iter().map(encode).collect();
    let (partition, x) = tverberg_points_with(&lifted, r, strategy)?;
    let witness = decode(&x, d)?;
    let parts: Vec<Vec<Ellipsoid>> =
        partition.parts.iter().map(|ix| ix.iter().map(|&i| es[i].clone()).collect()).collect();
    if !certify_ellipsoid_parts(&parts, &witness)? {
        return Err(GeomError::OptimizerFailed("ellipsoid witness failed containment certificate".into()));
    }
    Ok((partition, witness))
}

pub fn colorful_tverberg_ellipsoids(families: &[Vec<Ellipsoid>], r: usize) -> Result<(TransversalSet, Ellipsoid)> {
    let all: Vec<Ellipsoid> = families.iter().flatten().cloned().collect();
    let d = dim_of(&all)?;
    let classes: Vec<Vec<Point>> = families.iter().map(|f| f.iter().map(encode).collect()).collect();
    let (ts, x) = colorful_tverberg_points(&classes, r)?;
    let witness = decode(&x, d)?;
    let parts: Vec<Vec<Ellipsoid>> = ts
        .transversals
        .iter()
        .map(|t| t.iter().enumerate().map(|(j, &e)| families[j][e].clone()).collect())
        .collect();
    if !certify_ellipsoid_parts(&parts, &witness)? {
        return Err(GeomError::OptimizerFailed("ellipsoid witness failed containment certificate".into()));
    }
    Ok((ts, witness))
}
