//! Shrinking Tverberg parts to at most `d + 1` members while keeping a
//! voluminous common intersection.

use super::ellipsoids::colorful_tverberg_ellipsoids;
use super::points::TransversalSet;
use crate::combin::Combinations;
use crate::ellipsoid::{john_ellipsoid, Ellipsoid, UnitFrame};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{contains_ellipsoid, intersect_bodies, ConvexBody, Point};
use crate::num::{pow, Rational};
use crate::selection::{steinitz_reduce, vol_planes_refine};

#[derive(Clone, Debug)]
pub struct ReducedTransversals {
    /// For each input family, the sorted indices of the kept members.
    pub subfamilies: Vec<Vec<usize>>,
    pub original_volume: Rational,
    pub reduced_volume: Rational,
}

impl ReducedTransversals {
    pub fn ratio(&self) -> Rational {
        &self.reduced_volume / &self.original_volume
    }

    /// `(5 d^3 k 4^d)^{-d}`, the ratio guaranteed by the construction.
    pub fn guaranteed_ratio(d: usize, k: usize) -> Rational {
        let base = Rational::from_integer((5 * d.pow(3) * k * 4usize.pow(d as u32)).into());
        pow(&base, d).recip()
    }

    /// `(d^3 k 4^d / 5)^{-d}`, the ratio quoted in the lemma statement.
    pub fn stated_ratio(d: usize, k: usize) -> Rational {
        let base = Rational::new((d.pow(3) * k * 4usize.pow(d as u32)).into(), 5.into());
        pow(&base, d).recip()
    }
}

fn union_hull(bodies: &[&ConvexBody]) -> Result<ConvexBody> {
    ConvexBody::new(bodies.iter().flat_map(|b| b.vertices().iter().cloned()).collect())
}

fn full_intersection(hulls: &[ConvexBody], d: usize) -> Result<ConvexBody> {
    match intersect_bodies(hulls)? {
        Some(b) if b.is_full_dimensional() => Ok(b),
        _ => Err(GeomError::DegenerateHull { dim: d - 1 }),
    }
}

/// Keeps at most `d + 1` members of each family: maps the John ellipsoid of
/// the common intersection of the family hulls to the unit ball, reduces
/// each family's hull vertices to `2d` points around a small ball, refines
/// those to simplices sharing a large cell, and keeps the members owning
/// the simplex vertices.
pub fn reduce_transversals(families: &[Vec<ConvexBody>]) -> Result<ReducedTransversals> {
    let d = families
        .iter()
        .flatten()
        .next()
        .ok_or_else(|| invalid("no bodies"))?
        .dim();
    if families.iter().any(Vec::is_empty) {
        return Err(invalid("empty family"));
    }
    let hulls = families
        .iter()
        .map(|f| union_hull(&f.iter().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let region = full_intersection(&hulls, d)?;
    let original_volume = region.volume();
    let frame = UnitFrame::new(&john_ellipsoid(&region)?);

    let mut reduced_sets = Vec::with_capacity(families.len());
    let mut owners = Vec::with_capacity(families.len());
    for (family, hull) in families.iter().zip(&hulls) {
        let verts = hull.extreme_vertices();
        let owner: Vec<usize> = verts
            .iter()
            .map(|v| family.iter().position(|b| b.vertices().contains(v)).expect("hull vertex belongs to a member"))
            .collect();
        let unit: Vec<Point> = verts.iter().map(|v| frame.to_unit(v)).collect();
        let kept = steinitz_reduce(&unit)?;
        reduced_sets.push(kept.iter().map(|&i| unit[i].clone()).collect::<Vec<_>>());
        owners.push(kept.iter().map(|&i| owner[i]).collect::<Vec<_>>());
    }
    let refined = vol_planes_refine(&reduced_sets)?;
    let subfamilies: Vec<Vec<usize>> = refined
        .subsets
        .iter()
        .zip(&owners)
        .map(|(sub, own)| {
            let mut ix: Vec<usize> = sub.iter().map(|&i| own[i]).collect();
            ix.sort_unstable();
            ix.dedup();
            ix
        })
        .collect();
    let reduced_hulls = families
        .iter()
        .zip(&subfamilies)
        .map(|(f, ix)| union_hull(&ix.iter().map(|&i| &f[i]).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let reduced_volume = full_intersection(&reduced_hulls, d)?.volume();
    Ok(ReducedTransversals { subfamilies, original_volume, reduced_volume })
}

#[derive(Clone, Debug)]
pub struct ReducedColorful {
    pub transversals: TransversalSet,
    pub witness: Ellipsoid,
}

/// `r` disjoint transversals of `d + 1` of the families whose hulls share a
/// large ellipsoid: colorful Tverberg on John ellipsoids with enough
/// transversals that, after each is reduced to `d + 1` members, `r` of them
/// touch the same `d + 1` families.
pub fn reduced_colorful_tverberg(families: &[Vec<ConvexBody>], r: usize) -> Result<ReducedColorful> {
    let m = families.len();
    let d = families.iter().flatten().next().ok_or_else(|| invalid("no bodies"))?.dim();
    if r == 0 || m < d + 1 {
        return Err(invalid(format!("need r >= 1 and at least {} families", d + 1)));
    }
    let subsets: Vec<Vec<usize>> = Combinations::new(m, d + 1).collect();
    let k = subsets.len() * (r - 1) + 1;
    let johns = families
        .iter()
        .map(|f| f.iter().map(john_ellipsoid).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let (ts, _) = colorful_tverberg_ellipsoids(&johns, k)?;
    let parts: Vec<Vec<ConvexBody>> = ts
        .transversals
        .iter()
        .map(|t| t.iter().enumerate().map(|(j, &e)| families[j][e].clone()).collect())
        .collect();
    let reduced = reduce_transversals(&parts)?;
    // Member j of each transversal comes from family j, so the kept indices
    // are family indices.
    let counts: Vec<usize> = subsets
        .iter()
        .map(|s| reduced.subfamilies.iter().filter(|t| t.iter().all(|j| s.contains(j))).count())
        .collect();
    let best = (0..subsets.len())
        .max_by(|&a, &b| counts[a].cmp(&counts[b]).then_with(|| b.cmp(&a)))
        .expect("at least one subset");
    if counts[best] < r {
        return Err(GeomError::NotFound("pigeonhole step found fewer than r reduced transversals".into()));
    }
    let chosen_families = &subsets[best];
    let chosen: Vec<usize> = (0..k)
        .filter(|&i| reduced.subfamilies[i].iter().all(|j| chosen_families.contains(j)))
        .take(r)
        .collect();
    let transversals: Vec<Vec<usize>> =
        chosen.iter().map(|&i| chosen_families.iter().map(|&j| ts.transversals[i][j]).collect()).collect();
    let hulls = transversals
        .iter()
        .map(|t| union_hull(&t.iter().zip(chosen_families).map(|(&e, &j)| &families[j][e]).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let witness = john_ellipsoid(&full_intersection(&hulls, d)?)?;
    for h in &hulls {
        if !contains_ellipsoid(&h.hull()?.hrep, &witness) {
            return Err(GeomError::OptimizerFailed("reduced witness failed containment".into()));
        }
    }
    Ok(ReducedColorful {
        transversals: TransversalSet { transversals, family_subset: Some(chosen_families.clone()) },
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn square(x: Rational, y: Rational) -> ConvexBody {
        ConvexBody::cuboid(&[x.clone(), y.clone()], &[x + int(1), y + int(1)])
    }

    fn interval(a: Rational, b: Rational) -> ConvexBody {
        ConvexBody::new(vec![Point::new(vec![a]), Point::new(vec![b])]).unwrap()
    }

    #[test]
    fn single_bodies_are_kept() {
        let fams = vec![vec![square(int(0), int(0))], vec![square(rat(1, 2), rat(1, 2))]];
        let out = reduce_transversals(&fams).unwrap();
        assert_eq!(out.subfamilies, vec![vec![0], vec![0]]);
        assert_eq!(out.ratio(), int(1));
    }

    #[test]
    fn overlapping_squares_reduce() {
        let offs = [(0, 0), (1, 0), (0, 1), (1, 1)];
        let fam = |dx: i64| -> Vec<ConvexBody> {
            offs.iter().map(|&(x, y)| square(rat(x + dx, 4), rat(y, 4))).collect()
        };
        let fams = vec![fam(0), fam(1)];
        let out = reduce_transversals(&fams).unwrap();
        assert!(out.subfamilies.iter().all(|s| s.len() <= 3));
        assert!(out.ratio() >= ReducedTransversals::guaranteed_ratio(2, 2));
        assert!(out.ratio() >= ReducedTransversals::stated_ratio(2, 2));
    }

    #[test]
    fn touching_families_are_degenerate() {
        let fams = vec![vec![square(int(0), int(0))], vec![square(int(1), int(0))]];
        assert!(matches!(reduce_transversals(&fams), Err(GeomError::DegenerateHull { .. })));
    }

    #[test]
    fn intervals_on_a_line() {
        // d = 1: two families (lift dimension 2), r = 2.
        let fams = vec![
            vec![interval(int(0), int(4)), interval(int(-1), int(5))],
            vec![interval(int(0), int(6)), interval(int(1), int(5))],
        ];
        let out = reduced_colorful_tverberg(&fams, 2).unwrap();
        assert!(out.transversals.is_disjoint());
        assert_eq!(out.transversals.transversals.len(), 2);
        assert_eq!(out.transversals.family_subset, Some(vec![0, 1]));
    }
}
