use std::collections::BTreeMap;

use crate::combin::Combinations;
use crate::ellipsoid::Ellipsoid;
use crate::error::{GeomError, Result};
use crate::geom::{contains_ellipsoid, convex_hull, point_in_hull, ConvexBody, Point};
use crate::num::{binomial, Rational};
use crate::par;
use crate::tverberg::Segment;

/// Tuple enumerations beyond this many tuples are refused.
pub const MAX_TUPLES: u128 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Ellipsoid(Ellipsoid),
    Segment(Segment),
}

impl Witness {
    pub fn dim(&self) -> usize {
        match self {
            Witness::Ellipsoid(e) => e.dim(),
            Witness::Segment(s) => s.dim(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SelectionWitness {
    pub witness: Witness,
    /// Sorted index tuples whose union hull contains the witness.
    pub hit_tuples: Vec<Vec<usize>>,
    pub tuple_size: usize,
    /// `|hit_tuples| / C(n, tuple_size)`.
    pub fraction: Rational,
    /// Named exact quantities recorded by the construction.
    pub bounds: BTreeMap<String, Rational>,
}

/// Exact test that the witness lies in the hull of the union of `bodies`.
pub fn witness_in_hull(witness: &Witness, bodies: &[&ConvexBody]) -> bool {
    let cloud: Vec<Point> = bodies.iter().flat_map(|b| b.vertices().iter().cloned()).collect();
    match witness {
        Witness::Ellipsoid(e) => convex_hull(&cloud).is_ok_and(|h| contains_ellipsoid(&h.hrep, e)),
        Witness::Segment(s) => point_in_hull(&s.a, &cloud) && point_in_hull(&s.b, &cloud),
    }
}

/// All `size`-subsets of the family whose union hull contains the witness.
pub fn hit_tuples(family: &[ConvexBody], witness: &Witness, size: usize) -> Result<Vec<Vec<usize>>> {
    let total = binomial(family.len(), size);
    if total > MAX_TUPLES {
        return Err(GeomError::Unsupported(format!("{total} tuples exceed the enumeration limit")));
    }
    let tuples: Vec<Vec<usize>> = Combinations::new(family.len(), size).collect();
    let hits = par::filter(tuples.len(), |i| {
        witness_in_hull(witness, &tuples[i].iter().map(|&j| &family[j]).collect::<Vec<_>>())
    });
    Ok(hits.into_iter().map(|i| tuples[i].clone()).collect())
}

pub(crate) fn finish(
    family: &[ConvexBody],
    witness: Witness,
    size: usize,
    bounds: BTreeMap<String, Rational>,
) -> Result<SelectionWitness> {
    let hit = hit_tuples(family, &witness, size)?;
    let total = binomial(family.len(), size);
    let fraction = Rational::new((hit.len() as u128).into(), total.into());
    Ok(SelectionWitness { witness, hit_tuples: hit, tuple_size: size, fraction, bounds })
}

/// Smallest volume in the family.
pub(crate) fn min_volume(family: &[ConvexBody]) -> Rational {
    family.iter().map(ConvexBody::volume).min().expect("nonempty family")
}

/// `1 - 10^{-4}`, the slack allowed for the inscribed-ellipsoid optimizer.
pub(crate) fn optimizer_slack() -> Rational {
    Rational::new(9_999.into(), 10_000.into())
}
