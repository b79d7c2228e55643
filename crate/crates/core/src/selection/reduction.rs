use std::collections::BTreeMap;

use super::steinitz::{steinitz_radius, steinitz_reduce};
use super::vol_planes::vol_planes_refine;
use super::witness::{finish, min_volume, optimizer_slack, SelectionWitness, Witness};
use super::SelectionOptions;
use crate::combin::Combinations;
use crate::ellipsoid::{john_ellipsoid, param_dim, shrink, unit_ball_polytope, Ellipsoid, UnitFrame};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{contains_ellipsoid, ConvexBody, Point};
use crate::num::{binomial, int, pow, Rational};
use crate::sametype::best_witness;
use crate::tverberg::{partition_count, tverberg_ellipsoids_with, Strategy, EXHAUSTIVE_LIMIT};
use crate::{par, rng};

/// Bodies needed for `parts` Tverberg parts of lifted ellipsoids.
pub fn required_bodies(d: usize, parts: usize) -> usize {
    (parts.max(1) - 1) * (param_dim(d) + 1) + 1
}

/// The largest part count whose Tverberg number fits in `n` bodies, capped
/// at the lifted dimension.
pub fn max_parts(d: usize, n: usize) -> usize {
    (1..=param_dim(d)).rev().find(|&r| required_bodies(d, r) <= n).unwrap_or(1)
}

pub fn selection_2d(family: &[ConvexBody]) -> Result<SelectionWitness> {
    selection_2d_with(family, &SelectionOptions::default())
}

/// Tverberg partitions of sampled tuples into `d(d+3)/2` parts, each part
/// reduced to `2d` bodies whose hull holds a fixed fraction of the Tverberg
/// ellipsoid; the candidate ellipsoid lying in most reduced hulls is the
/// witness for `2d`-tuples.
pub fn selection_2d_with(family: &[ConvexBody], opts: &SelectionOptions) -> Result<SelectionWitness> {
    reduce_select(family, opts, Reduction::Steinitz)
}

pub fn selection_simplex(family: &[ConvexBody]) -> Result<SelectionWitness> {
    selection_simplex_with(family, &SelectionOptions::default())
}

/// As [`selection_2d_with`], with the reduced point sets further refined to
/// simplices sharing a large cell, so every part is covered by `d + 1`
/// bodies and the witness is the John ellipsoid of that cell.
pub fn selection_simplex_with(family: &[ConvexBody], opts: &SelectionOptions) -> Result<SelectionWitness> {
    reduce_select(family, opts, Reduction::Simplex)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Reduction {
    Steinitz,
    Simplex,
}

struct PartResult {
    tuples: Vec<Vec<usize>>,
    witness: Ellipsoid,
    bounds: BTreeMap<String, Rational>,
}

fn sampled_subsets(n: usize, k: usize, samples: usize, seed: u64) -> Vec<Vec<usize>> {
    if binomial(n, k) <= samples as u128 {
        return Combinations::new(n, k).collect();
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut index = 0;
    while out.len() < samples {
        let mut r = rng::substream(seed, "selection-tuple", index);
        index += 1;
        let mut t = rand::seq::index::sample(&mut r, n, k).into_vec();
        t.sort_unstable();
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

fn union_hull(family: &[ConvexBody], members: &[usize]) -> Result<ConvexBody> {
    ConvexBody::new(members.iter().flat_map(|&i| family[i].vertices().iter().cloned()).collect())
}

/// Extends `chosen` to `size` members: first from `part`, then from the
/// whole family, each in increasing index order.
fn pad(mut chosen: Vec<usize>, part: &[usize], n: usize, size: usize) -> Vec<usize> {
    chosen.sort_unstable();
    chosen.dedup();
    for i in part.iter().copied().chain(0..n) {
        if chosen.len() >= size {
            break;
        }
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

fn reduce_select(family: &[ConvexBody], opts: &SelectionOptions, variant: Reduction) -> Result<SelectionWitness> {
    let n = family.len();
    let d = family.first().ok_or_else(|| invalid("empty family"))?.dim();
    if family.iter().any(|b| b.dim() != d) {
        return Err(invalid("bodies of mixed dimension"));
    }
    let parts = opts.parts.unwrap_or(param_dim(d));
    if parts == 0 {
        return Err(invalid("part count must be positive"));
    }
    let size = match variant {
        Reduction::Steinitz => 2 * d,
        Reduction::Simplex => d + 1,
    };
    let need = required_bodies(d, parts).max(size);
    if n < need {
        return Err(GeomError::TooFewBodies { need, got: n });
    }
    let tuple_len = required_bodies(d, parts);
    let johns = par::map(family, john_ellipsoid).into_iter().collect::<Result<Vec<_>>>()?;
    let min_vol = min_volume(family);

    let mut results: Vec<PartResult> = Vec::new();
    let mut failures = 0usize;
    for (t, tuple) in sampled_subsets(n, tuple_len, opts.samples.max(1), opts.seed).into_iter().enumerate() {
        let es: Vec<Ellipsoid> = tuple.iter().map(|&i| johns[i].clone()).collect();
        let strategy = if partition_count(tuple_len, parts) <= EXHAUSTIVE_LIMIT {
            Strategy::Exhaustive
        } else {
            Strategy::Heuristic { seed: opts.seed.wrapping_add(t as u64) }
        };
        let (partition, e) = match tverberg_ellipsoids_with(&es, parts, strategy) {
            Ok(x) => x,
            Err(GeomError::NotFound(_) | GeomError::OptimizerFailed(_)) => {
                failures += 1;
                continue;
            }
            Err(err) => return Err(err),
        };
        let members: Vec<Vec<usize>> =
            partition.parts.iter().map(|p| p.iter().map(|&i| tuple[i]).collect()).collect();
        match reduce_parts(family, &members, &e, variant, d, min_vol.clone()) {
            Ok(r) => results.push(r),
            Err(GeomError::NotFound(_) | GeomError::PreconditionFailed(_) | GeomError::DegenerateHull { .. }) => {
                failures += 1
            }
            Err(err) => return Err(err),
        }
    }
    if results.is_empty() {
        return Err(GeomError::NotFound(format!("all {failures} sampled tuples failed to produce a partition")));
    }
    let mut tuples: Vec<Vec<usize>> = results.iter().flat_map(|r| r.tuples.iter().cloned()).collect();
    tuples.sort();
    tuples.dedup();
    let hulls = tuples.iter().map(|t| union_hull(family, t)).collect::<Result<Vec<_>>>()?;
    let witnesses: Vec<Ellipsoid> = results.iter().map(|r| r.witness.clone()).collect();
    let helly = best_witness(&hulls, &witnesses).expect("nonempty witnesses");
    let chosen = witnesses.iter().position(|w| *w == helly.witness).unwrap();
    let mut bounds = results.swap_remove(chosen).bounds;
    bounds.insert("minVolume".to_string(), min_vol);
    bounds.insert("parts".to_string(), int(parts as i64));
    bounds.insert("hellyMembers".to_string(), int(helly.members.len() as i64));
    bounds.insert("candidateTuples".to_string(), int(tuples.len() as i64));
    bounds.insert("failedSamples".to_string(), int(failures as i64));
    bounds.insert("witnessVolumeLower".to_string(), helly.witness.volume_lower_bound());
    finish(family, Witness::Ellipsoid(helly.witness), size, bounds)
}

fn reduce_parts(
    family: &[ConvexBody],
    members: &[Vec<usize>],
    e: &Ellipsoid,
    variant: Reduction,
    d: usize,
    min_vol: Rational,
) -> Result<PartResult> {
    let n = family.len();
    let hulls = members.iter().map(|m| union_hull(family, m)).collect::<Result<Vec<_>>>()?;
    let inside = |e: &Ellipsoid| hulls.iter().all(|h| h.hull().is_ok_and(|hh| contains_ellipsoid(&hh.hrep, e)));
    // The decoded Tverberg ellipsoid lies in every part hull; when exact
    // rounding breaks that, fall back to its certified shrink.
    let mut bounds = BTreeMap::new();
    let base = if inside(e) {
        e.clone()
    } else {
        let s = shrink(e, &unit_ball_polytope(d)?.factor)?;
        if !inside(&s) {
            return Err(GeomError::OptimizerFailed("Tverberg ellipsoid escapes a part hull".into()));
        }
        bounds.insert("baseShrunk".to_string(), int(1));
        s
    };
    let frame = UnitFrame::new(&base);
    let mut reduced: Vec<Vec<Point>> = Vec::with_capacity(members.len());
    let mut owners: Vec<Vec<usize>> = Vec::with_capacity(members.len());
    for (m, hull) in members.iter().zip(&hulls) {
        let verts = hull.extreme_vertices();
        let owner: Vec<usize> = verts
            .iter()
            .map(|v| *m.iter().find(|&&i| family[i].vertices().contains(v)).expect("hull vertex has an owner"))
            .collect();
        let unit: Vec<Point> = verts.iter().map(|v| frame.to_unit(v)).collect();
        let kept = steinitz_reduce(&unit)?;
        reduced.push(kept.iter().map(|&i| unit[i].clone()).collect());
        owners.push(kept.iter().map(|&i| owner[i]).collect());
    }
    let d_rat = int(d as i64);
    let r = members.len();
    let (tuples, witness) = match variant {
        Reduction::Steinitz => {
            let tuples: Vec<Vec<usize>> =
                owners.iter().zip(members).map(|(o, m)| pad(o.clone(), m, n, 2 * d)).collect();
            let witness = shrink(&base, &steinitz_radius(d))?;
            let floor = pow(&(int(5) * pow(&d_rat, 3)), d).recip() * &min_vol * optimizer_slack();
            bounds.insert("volumeFloor".to_string(), floor.clone());
            bounds.insert("floorMet".to_string(), int(witness.volume_at_least(&floor) as i64));
            (tuples, witness)
        }
        Reduction::Simplex => {
            let refined = vol_planes_refine(&reduced)?;
            let tuples: Vec<Vec<usize>> = refined
                .subsets
                .iter()
                .zip(&owners)
                .zip(members)
                .map(|((sub, o), m)| pad(sub.iter().map(|&i| o[i]).collect(), m, n, d + 1))
                .collect();
            let cell = ConvexBody::new(refined.cell.vertices().iter().map(|v| frame.from_unit(v)).collect())?;
            let cell_volume = cell.volume();
            let chain = pow(&int((r as u128 * binomial(2 * d, d)) as i64), d).recip()
                * pow(&(int(5) * &d_rat * &d_rat), d).recip()
                * pow(&d_rat, d).recip()
                * &min_vol
                * optimizer_slack();
            let witness = john_ellipsoid(&cell)?;
            let floor = &chain * pow(&d_rat, d).recip() * optimizer_slack();
            bounds.insert("cellVolume".to_string(), cell_volume.clone());
            bounds.insert("chainBound".to_string(), chain.clone());
            bounds.insert("chainMet".to_string(), int((cell_volume >= chain) as i64));
            bounds.insert("volumeFloor".to_string(), floor.clone());
            bounds.insert("floorMet".to_string(), int(witness.volume_at_least(&floor) as i64));
            (tuples, witness)
        }
    };
    for t in &tuples {
        let h = union_hull(family, t)?;
        if !contains_ellipsoid(&h.hull()?.hrep, &witness) {
            return Err(GeomError::OptimizerFailed("reduced tuple hull misses the witness".into()));
        }
    }
    Ok(PartResult { tuples, witness, bounds })
}
