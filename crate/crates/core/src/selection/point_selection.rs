use std::collections::BTreeSet;

use crate::combin::Combinations;
use crate::error::{invalid, GeomError, Result};
use crate::geom::{arrangement_cells, orientation, point_in_hull, spanned_hyperplanes, ConvexBody, Point};
use crate::par;

/// Number of closed simplices spanned by `points` that contain `p`.
pub fn simplex_depth(p: &Point, points: &[Point]) -> usize {
    let d = p.dim();
    Combinations::new(points.len(), d + 1)
        .filter(|s| {
            let simplex: Vec<Point> = s.iter().map(|&i| points[i].clone()).collect();
            point_in_hull(p, &simplex)
        })
        .count()
}

/// A point of maximum simplex depth. Depth is constant on every relatively
/// open face of the arrangement of hyperplanes spanned by d-subsets and can
/// only grow when passing to the boundary of a face, so it suffices to
/// evaluate it at the vertices of the arrangement cells; cell samples are
/// included so the answer is interior whenever that is as deep. Ties go to
/// the lexicographically smallest point.
pub fn point_selection(points: &[Point]) -> Result<(Point, usize)> {
    let d = Point::check_dims(points)?;
    if points.len() < d + 1 {
        return Err(invalid(format!("need at least {} points", d + 1)));
    }
    for s in Combinations::new(points.len(), d + 1) {
        let sub: Vec<Point> = s.iter().map(|&i| points[i].clone()).collect();
        if orientation(&sub)? == 0 {
            return Err(GeomError::DegeneratePosition(format!("points {s:?} are affinely dependent")));
        }
    }
    let region = ConvexBody::new(points.to_vec())?;
    let cells = arrangement_cells(&spanned_hyperplanes(points), &region)?;
    let mut probes: BTreeSet<Point> = cells.iter().flat_map(|c| c.body.extreme_vertices().iter().cloned()).collect();
    probes.extend(cells.iter().map(|c| c.sample.clone()));
    let probes: Vec<Point> = probes.into_iter().collect();
    let depths = par::map(&probes, |p| simplex_depth(p, points));
    let best = (0..probes.len())
        .max_by(|&a, &b| depths[a].cmp(&depths[b]).then_with(|| b.cmp(&a)))
        .unwrap();
    Ok((probes[best].clone(), depths[best]))
}

/// Scores candidates by exact depth over the given index tuples of
/// `points` (closed hull membership) and returns the deepest one, ties to
/// the lexicographically smallest, with its depth.
pub fn deepest_candidate(points: &[Point], candidates: &[Point], tuples: &[Vec<usize>]) -> (usize, usize) {
    let depths = par::map(candidates, |c| {
        tuples
            .iter()
            .filter(|t| point_in_hull(c, &t.iter().map(|&i| points[i].clone()).collect::<Vec<_>>()))
            .count()
    });
    let best = (0..candidates.len())
        .max_by(|&a, &b| depths[a].cmp(&depths[b]).then_with(|| candidates[b].cmp(&candidates[a])))
        .expect("at least one candidate");
    (best, depths[best])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn line_of_four_points() {
        let pts: Vec<Point> = (0..4).map(|i| Point::from_i64(&[i])).collect();
        let (p, depth) = point_selection(&pts).unwrap();
        // Closed intervals: the endpoint 1 lies in five of the six, every
        // point of the open cell (1, 2) in four.
        assert_eq!(depth, 5);
        assert_eq!(p, Point::from_i64(&[1]));
        assert_eq!(simplex_depth(&Point::new(vec![rat(3, 2)]), &pts), 4);
    }

    #[test]
    fn square_and_simplex() {
        let sq: Vec<Point> = [[0, 0], [1, 0], [1, 1], [0, 1]].iter().map(|p| Point::from_i64(p)).collect();
        let (p, depth) = point_selection(&sq).unwrap();
        assert_eq!(depth, 4);
        assert_eq!(p, Point::new(vec![rat(1, 2), rat(1, 2)]));
        // Exhaustive grid oracle never exceeds the returned depth.
        for i in 1..40 {
            for j in 1..40 {
                let q = Point::new(vec![rat(i, 40), rat(j, 40)]);
                assert!(simplex_depth(&q, &sq) <= depth);
            }
        }
        let tri: Vec<Point> = [[0, 0], [3, 0], [0, 3]].iter().map(|p| Point::from_i64(p)).collect();
        assert_eq!(point_selection(&tri).unwrap().1, 1);
        let col: Vec<Point> = [[0, 0], [1, 1], [2, 2], [0, 1]].iter().map(|p| Point::from_i64(p)).collect();
        assert!(matches!(point_selection(&col), Err(GeomError::DegeneratePosition(_))));
    }
}
