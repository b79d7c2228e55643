use std::collections::BTreeSet;

use super::{ConvexBody, Hyperplane, Point};
use crate::error::Result;
use crate::linalg::{dot, nullspace, Matrix};
use crate::par;

/// One full-dimensional cell of an arrangement with a strictly interior
/// sample point.
#[derive(Clone, Debug)]
pub struct Cell {
    pub sample: Point,
    pub body: ConvexBody,
}

/// Cells of the arrangement of `planes` restricted to `region`, obtained by
/// splitting cells plane by plane.
pub fn arrangement_cells(planes: &[Hyperplane], region: &ConvexBody) -> Result<Vec<Cell>> {
    let hull = region.hull()?;
    let mut cells = vec![ConvexBody::new(hull.vertices.clone())?];
    for plane in planes {
        let split: Vec<Vec<ConvexBody>> = par::map(&cells, |cell| {
            let verts = cell.extreme_vertices();
            let neg = verts.iter().any(|v| plane.side(v) < 0);
            let pos = verts.iter().any(|v| plane.side(v) > 0);
            if neg && pos {
                [cell.clip(&plane.lower()), cell.clip(&plane.upper())].into_iter().flatten().collect()
            } else {
                vec![cell.clone()]
            }
        });
        cells = split.into_iter().flatten().collect();
    }
    Ok(par::map(&cells, |body| Cell { sample: body.vertex_centroid(), body: body.clone() }))
}

/// All distinct hyperplanes spanned by affinely independent d-subsets.
pub fn spanned_hyperplanes(points: &[Point]) -> Vec<Hyperplane> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let d = first.dim();
    let mut out = BTreeSet::new();
    for subset in crate::combin::Combinations::new(points.len(), d) {
        let diffs: Matrix = subset[1..].iter().map(|&i| points[i].sub(&points[subset[0]])).collect();
        let ns = nullspace(&diffs, d);
        if ns.len() != 1 {
            continue;
        }
        let normal = ns.into_iter().next().unwrap();
        let offset = dot(&normal, &points[subset[0]].0);
        out.insert(Hyperplane { normal, offset }.normalized());
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, Rational};

    fn line(a: i64, b: i64, c: i64) -> Hyperplane {
        Hyperplane::new(vec![int(a), int(b)], int(c)).unwrap()
    }

    fn bx(r: i64) -> ConvexBody {
        ConvexBody::cuboid(&[int(-r), int(-r)], &[int(r), int(r)])
    }

    #[test]
    fn axis_lines_make_four_cells() {
        let cells = arrangement_cells(&[line(1, 0, 0), line(0, 1, 0)], &bx(1)).unwrap();
        assert_eq!(cells.len(), 4);
        let total: Rational = cells.iter().map(|c| c.body.volume()).sum();
        assert_eq!(total, int(4));
        assert_eq!(arrangement_cells(&[line(1, 1, 0)], &bx(1)).unwrap().len(), 2);
    }

    #[test]
    fn generic_lines_match_sign_vector_count() {
        let planes = vec![line(1, 0, 0), line(0, 1, 0), line(1, 1, 1)];
        let cells = arrangement_cells(&planes, &bx(100)).unwrap();
        assert_eq!(cells.len(), 7);
        for c in &cells {
            assert!(planes.iter().all(|h| h.side(&c.sample) != 0));
        }
    }

    #[test]
    fn spanned_lines_of_square() {
        let sq: Vec<Point> = [[0, 0], [1, 0], [1, 1], [0, 1]].iter().map(|p| Point::from_i64(p)).collect();
        assert_eq!(spanned_hyperplanes(&sq).len(), 6);
    }
}
