use num_traits::{One, Signed};

use super::quadratic::{selection_quadratic_with, Mode};
use super::reduction::{max_parts, selection_2d_with, selection_simplex_with};
use super::witness::{min_volume, optimizer_slack, Witness};
use super::SelectionOptions;
use crate::combin::Combinations;
use crate::ellipsoid::{param_dim, Ellipsoid};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{contains_ellipsoid, ConvexBody, Hull};
use crate::num::{binomial, ceil_to_usize, int, pow, Rational};
use crate::{par, rng};

/// Families up to this size are scanned exhaustively.
pub const EXHAUSTIVE_FAMILY: usize = 20;
/// Random subfamilies drawn for larger families.
pub const SUBFAMILY_DRAWS: usize = 10_000;
/// Largest subfamily count confirmed exhaustively after sampling.
const CONFIRM_LIMIT: u128 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NetVariant {
    Quadratic,
    Steinitz,
    Simplex,
}

impl NetVariant {
    /// Tuple size of the underlying selection theorem.
    pub fn alpha(self, d: usize) -> usize {
        match self {
            NetVariant::Quadratic => param_dim(d) + 1,
            NetVariant::Steinitz => 2 * d,
            NetVariant::Simplex => d + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NetVariant::Quadratic => "quadratic",
            NetVariant::Steinitz => "steinitz",
            NetVariant::Simplex => "simplex",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EpsNet {
    pub pieces: Vec<Ellipsoid>,
    /// For each piece, the subfamily it was selected from.
    pub sources: Vec<Vec<usize>>,
    pub epsilon: Rational,
    pub volume_floor: Rational,
    pub variant: NetVariant,
    pub subfamily_size: usize,
    /// Whether every subfamily of that size was checked.
    pub exhaustive: bool,
    /// Set when a selection step failed; the net is then partial.
    pub failed: bool,
}

impl EpsNet {
    /// `C(n, alpha) / C(s, alpha) + 1`, or `None` when `s < alpha`.
    pub fn counting_bound(&self, n: usize, d: usize) -> Option<Rational> {
        let alpha = self.variant.alpha(d);
        let den = binomial(self.subfamily_size, alpha);
        (den > 0).then(|| Rational::new(binomial(n, alpha).into(), den.into()) + Rational::one())
    }
}

/// Whether some piece lies in the hull of the union of `members`.
pub fn pierced(family: &[ConvexBody], members: &[usize], pieces: &[Ellipsoid]) -> bool {
    subfamily_hull(family, members).is_ok_and(|h| pieces.iter().any(|p| contains_ellipsoid(&h.hrep, p)))
}

fn subfamily_hull(family: &[ConvexBody], members: &[usize]) -> Result<Hull> {
    let cloud: Vec<_> = members.iter().flat_map(|&i| family[i].vertices().iter().cloned()).collect();
    crate::geom::convex_hull(&cloud)
}

fn volume_floor(variant: NetVariant, d: usize, parts: usize, min_vol: &Rational) -> Rational {
    let dr = int(d as i64);
    let inv = |x: Rational| pow(&x, d).recip();
    let v = match variant {
        NetVariant::Quadratic => inv(dr.clone()),
        NetVariant::Steinitz => inv(int(5) * pow(&dr, 3)),
        NetVariant::Simplex => {
            inv(int((parts as u128 * binomial(2 * d, d)) as i64))
                * inv(int(5) * &dr * &dr)
                * inv(dr.clone())
                * inv(dr.clone())
                * optimizer_slack()
        }
    };
    v * min_vol * optimizer_slack()
}

fn subfamilies(n: usize, s: usize, seed: u64) -> (Vec<Vec<usize>>, bool) {
    let total = binomial(n, s);
    if n <= EXHAUSTIVE_FAMILY || total <= SUBFAMILY_DRAWS as u128 {
        return (Combinations::new(n, s).collect(), true);
    }
    let mut r = rng::stream(seed, "net-subfamily");
    let mut out: Vec<Vec<usize>> = (0..SUBFAMILY_DRAWS)
        .map(|_| {
            let mut t = rand::seq::index::sample(&mut r, n, s).into_vec();
            t.sort_unstable();
            t
        })
        .collect();
    out.sort();
    out.dedup();
    (out, false)
}

/// Greedy volumetric weak net: while some subfamily of size `ceil(eps n)`
/// has a hull containing no piece, run the variant's selection on the
/// lexicographically first such subfamily and add its witness.
pub fn weak_epsnet(family: &[ConvexBody], epsilon: &Rational, variant: NetVariant, seed: u64) -> Result<EpsNet> {
    let n = family.len();
    let d = family.first().ok_or_else(|| invalid("empty family"))?.dim();
    if !epsilon.is_positive() || *epsilon > Rational::one() {
        return Err(invalid("epsilon must lie in (0, 1]"));
    }
    let s = ceil_to_usize(&(epsilon * int(n as i64))).max(1);
    let alpha = variant.alpha(d);
    let parts = max_parts(d, s);
    // Subfamilies smaller than the theorem's tuple size use tuples of the
    // subfamily size.
    let opts = SelectionOptions { seed, parts: Some(parts), tuple_size: Some(alpha.min(s)), ..SelectionOptions::default() };
    let volume_floor = volume_floor(variant, d, parts, &min_volume(family));

    let (subs, mut exhaustive) = subfamilies(n, s, seed);
    let hulls: Vec<Option<Hull>> = par::map(&subs, |m| subfamily_hull(family, m).ok());
    let mut open: Vec<bool> = vec![true; subs.len()];
    let mut net = EpsNet {
        pieces: Vec::new(),
        sources: Vec::new(),
        epsilon: epsilon.clone(),
        volume_floor,
        variant,
        subfamily_size: s,
        exhaustive,
        failed: false,
    };
    loop {
        let Some(next) = open.iter().position(|&o| o) else {
            if exhaustive || binomial(n, s) > CONFIRM_LIMIT {
                break;
            }
            // Confirm the sampled result against every subfamily.
            let all: Vec<Vec<usize>> = Combinations::new(n, s).collect();
            let missed = par::filter(all.len(), |i| !pierced(family, &all[i], &net.pieces));
            if missed.is_empty() {
                exhaustive = true;
                break;
            }
            if !add_piece(family, &all[missed[0]], variant, &opts, &mut net) {
                break;
            }
            continue;
        };
        if !add_piece(family, &subs[next], variant, &opts, &mut net) {
            break;
        }
        let piece = net.pieces.last().unwrap();
        let still: Vec<usize> = par::filter(subs.len(), |i| {
            open[i] && !hulls[i].as_ref().is_some_and(|h| contains_ellipsoid(&h.hrep, piece))
        });
        open = vec![false; subs.len()];
        for i in still {
            open[i] = true;
        }
        if open[next] {
            // The selection witness always lies in its own subfamily's hull.
            return Err(GeomError::OptimizerFailed("net piece does not pierce its subfamily".into()));
        }
    }
    net.exhaustive = exhaustive;
    Ok(net)
}

fn add_piece(family: &[ConvexBody], members: &[usize], variant: NetVariant, opts: &SelectionOptions, net: &mut EpsNet) -> bool {
    let sub: Vec<ConvexBody> = members.iter().map(|&i| family[i].clone()).collect();
    let result = match variant {
        NetVariant::Quadratic => selection_quadratic_with(&sub, Mode::Volume, opts),
        NetVariant::Steinitz => selection_2d_with(&sub, opts),
        NetVariant::Simplex => selection_simplex_with(&sub, opts),
    };
    match result {
        Ok(w) => {
            let Witness::Ellipsoid(e) = w.witness else { unreachable!("volume selections return ellipsoids") };
            net.pieces.push(e);
            net.sources.push(members.to_vec());
            true
        }
        Err(_) => {
            net.failed = true;
            false
        }
    }
}

/// Recounts unpierced subfamilies of the net's size (all of them).
pub fn unpierced_subfamilies(family: &[ConvexBody], net: &EpsNet) -> Vec<Vec<usize>> {
    let all: Vec<Vec<usize>> = Combinations::new(family.len(), net.subfamily_size).collect();
    par::filter(all.len(), |i| !pierced(family, &all[i], &net.pieces)).into_iter().map(|i| all[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::num::rat;
    use crate::selection::slab_instance;

    #[test]
    fn identical_bodies_one_piece() {
        let fam: Vec<ConvexBody> = (0..6).map(|_| ConvexBody::cuboid(&[int(0), int(0)], &[int(1), int(1)])).collect();
        let net = weak_epsnet(&fam, &rat(1, 2), NetVariant::Simplex, 0).unwrap();
        assert_eq!(net.pieces.len(), 1);
        assert!(unpierced_subfamilies(&fam, &net).is_empty());
    }

    #[test]
    fn clustered_intervals() {
        let fam: Vec<ConvexBody> = (0..12)
            .map(|i| {
                let a = int(10 * (i / 4) as i64) + rat((i % 4) as i64, 8);
                ConvexBody::new(vec![Point::new(vec![a.clone()]), Point::new(vec![a + int(1)])]).unwrap()
            })
            .collect();
        let net = weak_epsnet(&fam, &rat(1, 3), NetVariant::Steinitz, 0).unwrap();
        assert!(!net.failed);
        assert!(net.pieces.len() <= 3, "{}", net.pieces.len());
        assert!(unpierced_subfamilies(&fam, &net).is_empty());
    }

    #[test]
    fn slab_needs_one_piece_per_group() {
        let fam = slab_instance(2, &rat(1, 4), 16).unwrap();
        let net = weak_epsnet(&fam, &rat(1, 4), NetVariant::Simplex, 0).unwrap();
        assert!(net.pieces.len() >= 4);
        assert!(unpierced_subfamilies(&fam, &net).is_empty());
        for p in &net.pieces {
            assert!(p.volume_at_least(&net.volume_floor));
        }
        assert!(Rational::from_integer((net.pieces.len() as i64).into()) <= net.counting_bound(16, 2).unwrap());
    }
}
