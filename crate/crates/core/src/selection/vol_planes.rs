use std::collections::BTreeSet;

use num_traits::Zero;

use crate::combin::Combinations;
use crate::error::{invalid, GeomError, Result};
use crate::geom::{arrangement_cells, intersect_bodies, orientation, point_in_hull, spanned_hyperplanes, ConvexBody, Point};
use crate::num::{binomial, pow, Rational};

/// Output of [`vol_planes_refine`]: for each input set the indices of a
/// simplex containing the chosen cell.
#[derive(Clone, Debug)]
pub struct VolPlanes {
    pub subsets: Vec<Vec<usize>>,
    pub cell: ConvexBody,
    pub cell_volume: Rational,
    pub intersection_volume: Rational,
}

impl VolPlanes {
    /// `(m * C(k, d))^{-d}` for the given set count and maximum set size.
    pub fn bound_factor(m: usize, k: usize, d: usize) -> Rational {
        let base = Rational::from_integer((m as u128 * binomial(k, d)).into());
        pow(&base, d).recip()
    }

    /// Exact check `vol(cell) >= (m C(k,d))^{-d} vol(intersection)`.
    pub fn meets_bound(&self, m: usize, k: usize, d: usize) -> bool {
        self.cell_volume >= Self::bound_factor(m, k, d) * &self.intersection_volume
    }
}

/// Chooses one simplex per point set so that all simplices share a large
/// common cell: the cells of the arrangement of hyperplanes spanned by
/// the sets, restricted to the intersection of their hulls, are never cut
/// by a spanned hyperplane, so each lies in some simplex of every set.
/// The largest cell is used (ties broken by lexicographic sample).
pub fn vol_planes_refine(point_sets: &[Vec<Point>]) -> Result<VolPlanes> {
    let all: Vec<Point> = point_sets.iter().flatten().cloned().collect();
    let d = Point::check_dims(&all)?;
    if point_sets.is_empty() || point_sets.iter().any(|s| s.len() < d + 1) {
        return Err(invalid(format!("every point set needs at least {} points", d + 1)));
    }
    let hulls = point_sets.iter().map(|s| ConvexBody::new(s.clone())).collect::<Result<Vec<_>>>()?;
    let region = match intersect_bodies(&hulls) {
        Ok(Some(r)) if r.is_full_dimensional() => r,
        _ => return Err(GeomError::DegenerateHull { dim: d - 1 }),
    };
    let intersection_volume = region.volume();
    let planes: BTreeSet<_> = point_sets.iter().flat_map(|s| spanned_hyperplanes(s)).collect();
    let planes: Vec<_> = planes.into_iter().collect();
    let cells = arrangement_cells(&planes, &region)?;
    let vols: Vec<Rational> = crate::par::map(&cells, |c| c.body.volume());
    let best = (0..cells.len())
        .filter(|&i| !vols[i].is_zero())
        .max_by(|&a, &b| vols[a].cmp(&vols[b]).then_with(|| cells[b].sample.cmp(&cells[a].sample)))
        .ok_or(GeomError::DegenerateHull { dim: d - 1 })?;
    let cell = &cells[best];
    let subsets = point_sets
        .iter()
        .map(|set| {
            Combinations::new(set.len(), d + 1)
                .find(|s| {
                    let simplex: Vec<Point> = s.iter().map(|&i| set[i].clone()).collect();
                    orientation(&simplex).is_ok_and(|o| o != 0)
                        && cell.body.extreme_vertices().iter().all(|v| point_in_hull(v, &simplex))
                })
                .ok_or_else(|| GeomError::NotFound("no simplex contains the chosen cell".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VolPlanes { subsets, cell: cell.body.clone(), cell_volume: vols[best].clone(), intersection_volume })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn pts(rows: &[[i64; 2]]) -> Vec<Point> {
        rows.iter().map(|r| Point::from_i64(r)).collect()
    }

    #[test]
    fn simplex_is_kept() {
        let tri = pts(&[[0, 0], [4, 0], [0, 4]]);
        let out = vol_planes_refine(&[tri]).unwrap();
        assert_eq!(out.subsets, vec![vec![0, 1, 2]]);
        assert_eq!(out.cell_volume, rat(8, 1));
    }

    #[test]
    fn square_gives_quarter() {
        let sq = pts(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
        let out = vol_planes_refine(&[sq]).unwrap();
        assert_eq!(out.subsets[0].len(), 3);
        assert_eq!(out.cell_volume, rat(1, 4));
        assert!(out.meets_bound(1, 4, 2));
    }

    #[test]
    fn two_overlapping_squares() {
        let a = pts(&[[0, 0], [2, 0], [2, 2], [0, 2]]);
        let b = pts(&[[1, 1], [3, 1], [3, 3], [1, 3]]);
        let out = vol_planes_refine(&[a.clone(), b.clone()]).unwrap();
        assert!(out.meets_bound(2, 4, 2));
        for (set, sub) in [a, b].iter().zip(&out.subsets) {
            let simplex: Vec<Point> = sub.iter().map(|&i| set[i].clone()).collect();
            assert!(out.cell.vertices().iter().all(|v| point_in_hull(v, &simplex)));
        }
    }

    #[test]
    fn touching_sets_are_degenerate() {
        let a = pts(&[[0, 0], [1, 0], [0, 1]]);
        let b = pts(&[[1, 0], [2, 0], [1, 1]]);
        assert!(matches!(vol_planes_refine(&[a, b]), Err(GeomError::DegenerateHull { .. })));
    }
}
