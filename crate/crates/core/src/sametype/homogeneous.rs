//! Desk-scale homogeneous selection: exhaustive search for large
//! subfamilies all of whose transversal hulls share an ellipsoid.

use super::refine::uniform_order_type;
use crate::combin::Combinations;
use crate::ellipsoid::{john_ellipsoid, Ellipsoid};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{contains_ellipsoid, intersect_bodies, ConvexBody, OrderType};
use crate::num::{ceil_to_usize, Rational};
use crate::par;

/// Largest family accepted by [`homogeneous_selection_bruteforce`].
pub const MAX_FAMILY: usize = 8;
/// Largest number of subfamily tuples the search will scan.
pub const HOMOGENEOUS_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct HomogeneousSelection {
    /// Chosen member indices per family, each sorted.
    pub subfamilies: Vec<Vec<usize>>,
    /// Inside the hull of every transversal of the subfamilies.
    pub witness: Ellipsoid,
    /// The common order type of the transversals, when there is one.
    pub order_type: Option<OrderType>,
}

/// Every way of picking one index from each list.
fn transversals(subfamilies: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for s in subfamilies {
        out = out.iter().flat_map(|t: &Vec<usize>| s.iter().map(move |&i| [t.as_slice(), &[i]].concat())).collect();
    }
    out
}

fn transversal_hulls(families: &[Vec<ConvexBody>], subfamilies: &[Vec<usize>]) -> Result<Vec<ConvexBody>> {
    transversals(subfamilies)
        .iter()
        .map(|t| {
            ConvexBody::new(t.iter().enumerate().flat_map(|(f, &i)| families[f][i].vertices().iter().cloned()).collect())
        })
        .collect()
}

/// Exact check that `witness` lies in the hull of every transversal.
pub fn homogeneous_witness_holds(families: &[Vec<ConvexBody>], subfamilies: &[Vec<usize>], witness: &Ellipsoid) -> bool {
    if subfamilies.len() != families.len()
        || subfamilies.iter().zip(families).any(|(s, f)| s.is_empty() || s.iter().any(|&i| i >= f.len()))
    {
        return false;
    }
    transversal_hulls(families, subfamilies)
        .is_ok_and(|hulls| hulls.iter().all(|h| h.hull().is_ok_and(|h| contains_ellipsoid(&h.hrep, witness))))
}

/// Scans subfamily tuples with at least `target * n_i` members in family
/// `i`, in lexicographic order (first family most significant), and returns
/// the first whose transversal hulls have a full-dimensional common part,
/// with the John ellipsoid of that part as witness.
pub fn homogeneous_selection_bruteforce(families: &[Vec<ConvexBody>], target: &Rational) -> Result<HomogeneousSelection> {
    let d = families.iter().flatten().next().ok_or_else(|| invalid("no bodies"))?.dim();
    if families.iter().any(|f| f.is_empty() || f.len() > MAX_FAMILY) {
        return Err(invalid(format!("family sizes must lie in 1..={MAX_FAMILY}")));
    }
    if families.iter().flatten().any(|b| b.dim() != d) {
        return Err(invalid("bodies of mixed dimension"));
    }
    if *target <= Rational::from_integer(0.into()) || *target > Rational::from_integer(1.into()) {
        return Err(invalid("target fraction must lie in (0, 1]"));
    }
    let choices: Vec<Vec<Vec<usize>>> = families
        .iter()
        .map(|f| {
            let t = ceil_to_usize(&(target * Rational::from_integer((f.len() as i64).into()))).max(1);
            Combinations::new(f.len(), t).collect()
        })
        .collect();
    let total = choices.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128)).unwrap_or(u128::MAX);
    if total > HOMOGENEOUS_LIMIT {
        return Err(GeomError::Unsupported(format!("{total} subfamily tuples exceed the search limit")));
    }
    let found = par::find_first(total as usize, |mut rank| {
        let mut pick = vec![Vec::new(); choices.len()];
        for f in (0..choices.len()).rev() {
            pick[f] = choices[f][rank % choices[f].len()].clone();
            rank /= choices[f].len();
        }
        let hulls = transversal_hulls(families, &pick).ok()?;
        let common = intersect_bodies(&hulls).ok().flatten().filter(ConvexBody::is_full_dimensional)?;
        let witness = john_ellipsoid(&common).ok()?;
        homogeneous_witness_holds(families, &pick, &witness).then_some((pick, witness))
    });
    let (subfamilies, witness) =
        found.ok_or_else(|| GeomError::NotFound("no subfamily tuple has a common transversal region".into()))?;
    let order_type = if families.len() > d {
        let chosen: Vec<Vec<ConvexBody>> =
            subfamilies.iter().zip(families).map(|(s, f)| s.iter().map(|&i| f[i].clone()).collect()).collect();
        uniform_order_type(&chosen).ok().flatten()
    } else {
        None
    };
    Ok(HomogeneousSelection { subfamilies, witness, order_type })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::num::{int, rat};

    fn seg(a: Rational, b: Rational) -> ConvexBody {
        ConvexBody::new(vec![Point(vec![a]), Point(vec![b])]).unwrap()
    }

    #[test]
    fn clustered_intervals() {
        let a: Vec<ConvexBody> = (0..4).map(|i| seg(rat(i, 10), rat(i, 10) + int(2))).collect();
        let b: Vec<ConvexBody> = (0..4).map(|i| seg(rat(-i, 7), rat(-i, 7) + int(2))).collect();
        let fams = vec![a, b];
        let out = homogeneous_selection_bruteforce(&fams, &rat(1, 2)).unwrap();
        assert_eq!(out.subfamilies, vec![vec![0, 1], vec![0, 1]]);
        // Oracle: every pairwise hull contains the witness interval.
        let c = &out.witness.center()[0];
        let r = out.witness.shape()[0][0].clone();
        for &i in &out.subfamilies[0] {
            for &j in &out.subfamilies[1] {
                let pts: Vec<&Rational> =
                    fams[0][i].vertices().iter().chain(fams[1][j].vertices()).map(|p| &p.0[0]).collect();
                let (lo, hi) = (pts.iter().min().unwrap(), pts.iter().max().unwrap());
                assert!(*lo <= &(c - &r) && &(c + &r) <= *hi);
            }
        }
    }

    #[test]
    fn separated_triangle() {
        let sq = |x: i64, y: i64| ConvexBody::cuboid(&[int(x), int(y)], &[int(x + 1), int(y + 1)]);
        let fams = vec![vec![sq(0, 0), sq(1, 1)], vec![sq(20, 0), sq(21, 1)], vec![sq(0, 20), sq(1, 21)]];
        let out = homogeneous_selection_bruteforce(&fams, &rat(1, 2)).unwrap();
        assert!(homogeneous_witness_holds(&fams, &out.subfamilies, &out.witness));
        assert!(out.order_type.is_some());
    }

    #[test]
    fn disjoint_layout() {
        let fams = vec![vec![seg(int(0), int(1)), seg(int(10), int(11))], vec![seg(int(5), int(6)), seg(int(20), int(21))]];
        // Transversals {0,1}x{5,6} and {10,11}x{20,21} hulls are disjoint.
        assert!(matches!(homogeneous_selection_bruteforce(&fams, &int(1)), Err(GeomError::NotFound(_))));
    }
}
