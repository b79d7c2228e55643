use crate::combin::Combinations;
use crate::ellipsoid::{combination_decode, encode, john_ellipsoid, Ellipsoid};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{contains_ellipsoid, intersect_bodies, ConvexBody, Point};
use crate::num::{binomial, Rational};
use crate::{par, rng};

/// Tuples examined by [`fractional_helly_search`]; larger spaces are sampled.
pub const HELLY_TUPLES: u128 = 2_000;

#[derive(Clone, Debug)]
pub struct HellySubfamily {
    /// Every body containing the witness, in increasing order.
    pub members: Vec<usize>,
    pub witness: Ellipsoid,
}

fn slack() -> Rational {
    Rational::new(9_999.into(), 10_000.into())
}

/// Indices of the bodies containing `e`.
pub fn bodies_containing(bodies: &[ConvexBody], e: &Ellipsoid) -> Vec<usize> {
    par::filter(bodies.len(), |i| bodies[i].hull().is_ok_and(|h| contains_ellipsoid(&h.hrep, e)))
}

/// Among the candidate ellipsoids, the one contained in the most bodies
/// (ties to the earliest candidate).
pub fn best_witness(bodies: &[ConvexBody], candidates: &[Ellipsoid]) -> Option<HellySubfamily> {
    let members: Vec<Vec<usize>> = candidates.iter().map(|e| bodies_containing(bodies, e)).collect();
    let best = (0..candidates.len()).max_by(|&a, &b| members[a].len().cmp(&members[b].len()).then_with(|| b.cmp(&a)))?;
    Some(HellySubfamily { members: members[best].clone(), witness: candidates[best].clone() })
}

/// Searches for a large subfamily whose intersection holds an ellipsoid of
/// volume at least `floor (1 - 10^{-4})`: John ellipsoids of `k`-tuple
/// intersections that reach the floor are lifted to parameter space, their
/// centroid is added as a deep candidate (it still reaches the floor by
/// log-concavity), and the candidate inside the most bodies wins.
pub fn fractional_helly_search(bodies: &[ConvexBody], k: usize, floor: &Rational) -> Result<HellySubfamily> {
    let n = bodies.len();
    if k == 0 || k > n {
        return Err(invalid(format!("tuple size {k} is not in 1..={n}")));
    }
    let d = bodies[0].dim();
    let tuples: Vec<Vec<usize>> = if binomial(n, k) <= HELLY_TUPLES {
        Combinations::new(n, k).collect()
    } else {
        let mut r = rng::stream(0, "helly-tuples");
        let mut t: Vec<Vec<usize>> = (0..HELLY_TUPLES)
            .map(|_| {
                let mut s = rand::seq::index::sample(&mut r, n, k).into_vec();
                s.sort_unstable();
                s
            })
            .collect();
        t.sort();
        t.dedup();
        t
    };
    let target = floor * slack();
    let found = par::map(&tuples, |t| {
        let members: Vec<ConvexBody> = t.iter().map(|&i| bodies[i].clone()).collect();
        let cell = intersect_bodies(&members).ok().flatten().filter(ConvexBody::is_full_dimensional)?;
        john_ellipsoid(&cell).ok().filter(|e| e.volume_at_least(&target))
    });
    let mut candidates: Vec<Ellipsoid> = found.into_iter().flatten().collect();
    if candidates.is_empty() {
        return Err(GeomError::NotFound(format!("no {k}-tuple holds an ellipsoid above the floor")));
    }
    let lifted: Vec<Point> = candidates.iter().map(encode).collect();
    let w = Rational::new(1.into(), (lifted.len() as i64).into());
    candidates.push(combination_decode(&lifted, &vec![w; lifted.len()], d)?);
    Ok(best_witness(bodies, &candidates).expect("nonempty candidates"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn square(x: Rational, y: Rational) -> ConvexBody {
        ConvexBody::cuboid(&[x.clone(), y.clone()], &[x + int(1), y + int(1)])
    }

    #[test]
    fn identical_squares() {
        let fam: Vec<ConvexBody> = (0..5).map(|_| square(int(0), int(0))).collect();
        let out = fractional_helly_search(&fam, 3, &rat(1, 2)).unwrap();
        assert_eq!(out.members, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn six_share_a_core() {
        // Six squares all containing [1/2, 1] x [0, 1] plus two far away.
        let mut fam: Vec<ConvexBody> = (0..6).map(|i| square(rat(i, 12), int(0))).collect();
        fam.push(square(int(10), int(10)));
        fam.push(square(int(-10), int(3)));
        let out = fractional_helly_search(&fam, 3, &rat(1, 8)).unwrap();
        assert!((0..6).all(|i| out.members.contains(&i)));
        assert!(out.witness.volume_at_least(&(rat(1, 8) * slack())));
        // Maximality: no excluded body contains the witness.
        for i in 6..8 {
            assert!(!out.members.contains(&i));
        }
    }

    #[test]
    fn disjoint_bodies() {
        let fam: Vec<ConvexBody> = (0..4).map(|i| square(int(3 * i), int(0))).collect();
        assert!(matches!(fractional_helly_search(&fam, 2, &rat(1, 100)), Err(GeomError::NotFound(_))));
    }
}
