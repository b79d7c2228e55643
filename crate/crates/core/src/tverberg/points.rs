use nalgebra::DVector;
use num_traits::{One, Zero};

use super::minnorm::colorful_caratheodory;
use crate::combin::{partitions_into, stirling2, Combinations};
use crate::error::{invalid, GeomError, Result};
use crate::geom::Point;
use crate::lp::{Cmp, Lp};
use crate::num::{binomial, Rational};
use crate::par;
use crate::rng;

/// Above this many candidates the searches switch to the heuristic.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;
const MAX_PIVOTS: usize = 10_000;

/// Disjoint index sets over the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub parts: Vec<Vec<usize>>,
}

impl Partition {
    fn from_labels(labels: &[usize], r: usize) -> Self {
        let mut parts = vec![Vec::new(); r];
        for (i, &l) in labels.iter().enumerate() {
            parts[l].push(i);
        }
        Partition { parts }
    }

    pub fn is_disjoint(&self) -> bool {
        let mut all: Vec<usize> = self.parts.iter().flatten().copied().collect();
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == n
    }
}

/// `transversals[i][j]` is the element of class `j` used by transversal
/// `i`; `family_subset` names the classes when only some were used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalSet {
    pub transversals: Vec<Vec<usize>>,
    pub family_subset: Option<Vec<usize>>,
}

impl TransversalSet {
    pub fn is_disjoint(&self) -> bool {
        let k = self.transversals.first().map_or(0, Vec::len);
        (0..k).all(|j| {
            let mut col: Vec<usize> = self.transversals.iter().map(|t| t[j]).collect();
            col.sort_unstable();
            col.windows(2).all(|w| w[0] != w[1])
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Exhaustive when the candidate count is at most [`EXHAUSTIVE_LIMIT`].
    Auto,
    Exhaustive,
    /// Sarkaria lifting plus colorful Caratheodory pivoting, seeded.
    Heuristic { seed: u64 },
}

/// A point common to the hulls of all parts, by exact LP.
pub fn common_point(parts: &[Vec<Point>]) -> Option<Point> {
    let first = parts.first()?;
    if parts.iter().any(Vec::is_empty) {
        return None;
    }
    let d = first[0].dim();
    if parts.len() == 1 {
        return Some(first[0].clone());
    }
    let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
    let n: usize = sizes.iter().sum();
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &s| {
        let o = *acc;
        *acc += s;
        Some(o)
    }).collect();
    let mut lp = Lp::new(n);
    for (j, part) in parts.iter().enumerate() {
        let mut row = vec![Rational::zero(); n];
        for k in 0..part.len() {
            row[offsets[j] + k] = Rational::one();
        }
        lp.add(row, Cmp::Eq, Rational::one());
    }
    for (j, part) in parts.iter().enumerate().skip(1) {
        for c in 0..d {
            let mut row = vec![Rational::zero(); n];
            for (k, p) in first.iter().enumerate() {
                row[k] = p.0[c].clone();
            }
            for (k, p) in part.iter().enumerate() {
                row[offsets[j] + k] = -p.0[c].clone();
            }
            lp.add(row, Cmp::Eq, Rational::zero());
        }
    }
    let lam = lp.solve()?;
    let mut x = vec![Rational::zero(); d];
    for (k, p) in first.iter().enumerate() {
        if lam[k].is_zero() {
            continue;
        }
        for c in 0..d {
            x[c] += &lam[k] * &p.0[c];
        }
    }
    Some(Point(x))
}

fn parts_points(points: &[Point], p: &Partition) -> Vec<Vec<Point>> {
    p.parts.iter().map(|ix| ix.iter().map(|&i| points[i].clone()).collect()).collect()
}

/// Number of set partitions examined by exhaustive search.
pub fn partition_count(n: usize, r: usize) -> u128 {
    stirling2(n, r)
}

pub fn tverberg_points(points: &[Point], r: usize) -> Result<(Partition, Point)> {
    tverberg_points_with(points, r, Strategy::Auto)
}

pub fn tverberg_points_with(points: &[Point], r: usize, strategy: Strategy) -> Result<(Partition, Point)> {
    Point::check_dims(points)?;
    if r == 0 {
        return Err(invalid("r must be positive"));
    }
    let n = points.len();
    if r > n {
        return Err(GeomError::NotFound(format!("{n} points cannot form {r} nonempty parts")));
    }
    let strategy = match strategy {
        Strategy::Auto if partition_count(n, r) <= EXHAUSTIVE_LIMIT => Strategy::Exhaustive,
        Strategy::Auto => Strategy::Heuristic { seed: 0 },
        s => s,
    };
    match strategy {
        Strategy::Exhaustive => {
            let all = partitions_into(n, r);
            par::find_first(all.len(), |i| {
                let p = Partition::from_labels(&all[i], r);
                common_point(&parts_points(points, &p)).map(|x| (p, x))
            })
            .ok_or_else(|| GeomError::NotFound(format!("no partition of {n} points into {r} parts")))
        }
        Strategy::Heuristic { seed } => sarkaria_search(points, r, seed),
        Strategy::Auto => unreachable!(),
    }
}

/// Sarkaria's tensor lifting: point `i` in part `j` becomes
/// `(x_i, 1) (x) w_j` with `w_j = e_j` for `j < r - 1` and
/// `w_{r-1} = -(e_1 + ... + e_{r-1})`. A colorful choice with the origin
/// in its hull is a Tverberg partition.
fn sarkaria_search(points: &[Point], r: usize, seed: u64) -> Result<(Partition, Point)> {
    let n = points.len();
    if r == 1 {
        let p = Partition { parts: vec![(0..n).collect()] };
        return Ok((p, points[0].clone()));
    }
    let d = points[0].dim();
    let floats: Vec<Vec<f64>> = points.iter().map(Point::to_f64).collect();
    let centre: Vec<f64> = (0..d).map(|k| floats.iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
    let spread = floats
        .iter()
        .map(|p| p.iter().zip(&centre).map(|(a, c)| (a - c).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
        .max(1e-300);
    let classes: Vec<Vec<DVector<f64>>> = floats
        .iter()
        .map(|p| {
            let mut lifted: Vec<f64> = p.iter().zip(&centre).map(|(a, c)| (a - c) / spread).collect();
            lifted.push(1.0);
            (0..r)
                .map(|j| {
                    let mut v = DVector::zeros((d + 1) * (r - 1));
                    for (k, x) in lifted.iter().enumerate() {
                        for l in 0..r - 1 {
                            let w = if j == r - 1 { -1.0 } else if l == j { 1.0 } else { 0.0 };
                            v[k * (r - 1) + l] = x * w;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut rng = rng::stream(seed, "tverberg-heuristic");
    let mut found: Option<(Partition, Point)> = None;
    colorful_caratheodory(&classes, &mut rng, MAX_PIVOTS, |choice| {
        let p = Partition::from_labels(choice, r);
        if p.parts.iter().any(Vec::is_empty) {
            return false;
        }
        match common_point(&parts_points(points, &p)) {
            Some(x) => {
                found = Some((p, x));
                true
            }
            None => false,
        }
    });
    found.ok_or_else(|| GeomError::NotFound(format!("heuristic found no partition into {r} parts")))
}

/// Options for one color class: class 0 picks an increasing r-subset,
/// other classes pick ordered r-tuples of distinct elements.
fn class_options(size: usize, r: usize, first: bool) -> Vec<Vec<usize>> {
    if first {
        return Combinations::new(size, r).collect();
    }
    let mut out = Vec::new();
    for c in Combinations::new(size, r) {
        permutations(&c, &mut Vec::new(), &mut vec![false; r], &mut out);
    }
    out
}

fn permutations(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permutations(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

/// Number of candidate transversal systems examined exhaustively.
pub fn transversal_count(sizes: &[usize], r: usize) -> u128 {
    sizes.iter().enumerate().fold(1u128, |acc, (j, &s)| {
        let c = binomial(s, r);
        let perms = if j == 0 { c } else { (1..=r as u128).fold(c, |a, k| a.saturating_mul(k)) };
        acc.saturating_mul(perms)
    })
}

pub fn colorful_tverberg_points(classes: &[Vec<Point>], r: usize) -> Result<(TransversalSet, Point)> {
    colorful_tverberg_points_seeded(classes, r, 0)
}

/// Exhaustive over all systems of r disjoint transversals when there are at
/// most [`EXHAUSTIVE_LIMIT`]; otherwise seeded random sampling of systems.
pub fn colorful_tverberg_points_seeded(classes: &[Vec<Point>], r: usize, seed: u64) -> Result<(TransversalSet, Point)> {
    if r == 0 || classes.is_empty() {
        return Err(invalid("need at least one class and r >= 1"));
    }
    if classes.iter().any(|c| c.len() < r) {
        return Err(GeomError::NotFound(format!("some class has fewer than {r} elements")));
    }
    let all: Vec<Point> = classes.iter().flatten().cloned().collect();
    Point::check_dims(&all)?;
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let total = transversal_count(&sizes, r);
    let options: Vec<Vec<Vec<usize>>> = if total <= EXHAUSTIVE_LIMIT {
        sizes.iter().enumerate().map(|(j, &s)| class_options(s, r, j == 0)).collect()
    } else {
        Vec::new()
    };
    let check = |pick: &[Vec<usize>]| -> Option<(TransversalSet, Point)> {
        let transversals: Vec<Vec<usize>> = (0..r).map(|t| pick.iter().map(|o| o[t]).collect()).collect();
        let parts: Vec<Vec<Point>> =
            transversals.iter().map(|tr| tr.iter().enumerate().map(|(j, &e)| classes[j][e].clone()).collect()).collect();
        common_point(&parts).map(|x| (TransversalSet { transversals, family_subset: None }, x))
    };
    if total <= EXHAUSTIVE_LIMIT {
        let radix: Vec<usize> = options.iter().map(Vec::len).collect();
        return par::find_first(total as usize, |mut idx| {
            let mut pick = Vec::with_capacity(radix.len());
            // Mixed radix, last class fastest.
            let mut digits = vec![0; radix.len()];
            for j in (0..radix.len()).rev() {
                digits[j] = idx % radix[j];
                idx /= radix[j];
            }
            for (j, &dg) in digits.iter().enumerate() {
                pick.push(options[j][dg].clone());
            }
            check(&pick)
        })
        .ok_or_else(|| GeomError::NotFound("no system of disjoint transversals shares a point".into()));
    }
    use rand::seq::SliceRandom;
    let mut rng = rng::stream(seed, "colorful-sampling");
    for _ in 0..MAX_PIVOTS {
        let pick: Vec<Vec<usize>> = sizes
            .iter()
            .map(|&s| {
                let mut idx: Vec<usize> = (0..s).collect();
                idx.shuffle(&mut rng);
                idx.truncate(r);
                idx
            })
            .collect();
        if let Some(found) = check(&pick) {
            return Ok(found);
        }
    }
    Err(GeomError::NotFound("sampled transversal systems found no common point".into()))
}
