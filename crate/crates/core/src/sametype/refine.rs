//! The same-type refinement: repeated halving so that the hulls of the
//! refined families are pairwise separable in every bipartition, which
//! fixes the order type of all transversals.

use num_traits::{One, Signed, Zero};

use super::ham::{halving_hyperplane, MeasureFamily};
use crate::combin::Combinations;
use crate::error::{invalid, GeomError, Result};
use crate::geom::{family_order_type, strict_separator, ConvexBody, FamilyOrderType, Hyperplane, OrderType, Point};
use crate::linalg::dot;
use crate::num::{binomial, pow, rational_above, to_f64, Rational};

/// `plane` has every vertex of the `left` families strictly below it and
/// every vertex of the `right` families strictly above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub plane: Hyperplane,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    Separated(Vec<Separator>),
    /// Families on one side of a bipartition that admits no strict separator.
    Counterexample(Vec<usize>),
}

/// Nonempty subsets of `0..m-1` (the last index never appears), by
/// increasing size then lexicographically.
pub fn bipartition_subsets(m: usize) -> Vec<Vec<usize>> {
    (1..m).flat_map(|k| Combinations::new(m - 1, k)).collect()
}

fn vertices_of(families: &[Vec<ConvexBody>], idx: &[usize]) -> Vec<Point> {
    idx.iter().flat_map(|&i| families[i].iter().flat_map(|b| b.vertices().iter().cloned())).collect()
}

/// Exact check of a separator against the families.
pub fn separator_holds(families: &[Vec<ConvexBody>], sep: &Separator) -> bool {
    vertices_of(families, &sep.left).iter().all(|p| sep.plane.side(p) < 0)
        && vertices_of(families, &sep.right).iter().all(|p| sep.plane.side(p) > 0)
}

/// Strict separators for every bipartition of the families, by exact LP.
pub fn separability_check(families: &[Vec<ConvexBody>]) -> Separability {
    let m = families.len();
    let mut out = Vec::new();
    for left in bipartition_subsets(m) {
        let right: Vec<usize> = (0..m).filter(|i| !left.contains(i)).collect();
        match strict_separator(&vertices_of(families, &left), &vertices_of(families, &right)) {
            Some(plane) => out.push(Separator { left, right, plane }),
            None => return Separability::Counterexample(left),
        }
    }
    Separability::Separated(out)
}

#[derive(Clone, Debug)]
pub struct SameTypeCertificate {
    pub trimmed: Vec<Vec<ConvexBody>>,
    /// `parent_map[i][j]` is the input body of family `i` containing
    /// `trimmed[i][j]`.
    pub parent_map: Vec<Vec<usize>>,
    pub separators: Vec<Separator>,
    pub order_type: OrderType,
    pub alpha: Rational,
    /// Common volume after normalization on entry.
    pub rho: Rational,
    /// Common volume of every trimmed body.
    pub volume: Rational,
    /// Number of halving steps, `(2^d - 1) C(m, d+1)`.
    pub steps: usize,
}

/// `1 - 1/(2(1 - alpha))`, the fraction of a family surviving one step.
pub fn survival_fraction(alpha: &Rational) -> Rational {
    Rational::one() - (Rational::from_integer(2.into()) * (Rational::one() - alpha)).recip()
}

pub fn step_count(d: usize, m: usize) -> usize {
    ((1usize << d) - 1) * binomial(m, d + 1) as usize
}

/// A trimmed body and the index of the input body it came from.
type Piece = (ConvexBody, usize);

/// Refines `m >= d+1` families (`d <= 2`) so that all transversals share one
/// order type. Every body is first cut down to the smallest input volume
/// `rho`; each step halves the first `d` families of a `(d+1)`-subset with a
/// common halving hyperplane, keeps the pieces of volume at least
/// `alpha * rho` on the side prescribed by the current bipartition (the
/// last family keeps its larger side), and cuts those pieces, away from the
/// hyperplane, to volume exactly `alpha * rho`.
pub fn same_type_refine(families: &[Vec<ConvexBody>], alpha: &Rational) -> Result<SameTypeCertificate> {
    let d = families.iter().flatten().next().ok_or_else(|| invalid("no bodies"))?.dim();
    let m = families.len();
    if families.iter().flatten().any(|b| b.dim() != d) || families.iter().any(Vec::is_empty) {
        return Err(invalid("families must be nonempty and of one dimension"));
    }
    if d > 2 {
        return Err(GeomError::Unsupported(format!("same-type refinement is certified for d <= 2, got {d}")));
    }
    if m < d + 1 {
        return Err(invalid(format!("need at least {} families", d + 1)));
    }
    if !alpha.is_positive() || *alpha >= Rational::new(1.into(), 2.into()) {
        return Err(invalid("alpha must lie in (0, 1/2)"));
    }
    let rho = families.iter().flatten().map(ConvexBody::volume).min().unwrap();
    if rho.is_zero() {
        return Err(invalid("bodies must be full-dimensional"));
    }
    let mut current: Vec<Vec<(ConvexBody, usize)>> = families
        .iter()
        .map(|f| f.iter().enumerate().map(|(j, b)| cut_to_volume(b, &rho, 0).map(|c| (c, j))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut volume = rho.clone();
    let mut separators = Vec::new();
    let mut steps = 0;
    for group in Combinations::new(m, d + 1) {
        for local in bipartition_subsets(d + 1) {
            let left: Vec<usize> = local.iter().map(|&k| group[k]).collect();
            let measures = group[..d]
                .iter()
                .map(|&i| MeasureFamily::new(current[i].iter().map(|(b, _)| b.clone()).collect()))
                .collect::<Result<Vec<_>>>()?;
            let plane = halving_hyperplane(&measures)?;
            let threshold = alpha * &volume;
            let split = |i: usize| -> (Vec<Piece>, Vec<Piece>) {
                let side = |h: crate::geom::Halfspace| {
                    current[i]
                        .iter()
                        .filter_map(|(b, p)| b.clip(&h).filter(|c| c.volume() >= threshold).map(|c| (c, *p)))
                        .collect::<Vec<_>>()
                };
                (side(plane.lower()), side(plane.upper()))
            };
            let pieces: Vec<_> = group.iter().map(|&i| split(i)).collect();
            let last_keeps_above = pieces[d].1.len() >= pieces[d].0.len();
            for (&i, (below, above)) in group.iter().zip(pieces) {
                let in_left = left.contains(&i);
                // Left families sit on the side opposite to the last family.
                let keep = if in_left != last_keeps_above { above } else { below };
                if keep.is_empty() {
                    return Err(GeomError::HalvingDegenerate(format!("family {i} lost every body")));
                }
                current[i] = keep
                    .into_iter()
                    .map(|(b, p)| trim_away(&b, &threshold, &plane).map(|c| (c, p)))
                    .collect::<Result<Vec<_>>>()?;
            }
            let oriented = if last_keeps_above {
                plane
            } else {
                Hyperplane::new(plane.normal.iter().map(|x| -x).collect(), -plane.offset.clone())?
            };
            let right: Vec<usize> = group.iter().copied().filter(|i| !left.contains(i)).collect();
            separators.push(Separator { left, right, plane: oriented });
            volume = threshold;
            steps += 1;
        }
    }
    let trimmed: Vec<Vec<ConvexBody>> = current.iter().map(|f| f.iter().map(|(b, _)| b.clone()).collect()).collect();
    let parent_map: Vec<Vec<usize>> = current.iter().map(|f| f.iter().map(|(_, p)| *p).collect()).collect();
    let order_type = uniform_order_type(&trimmed)?
        .ok_or_else(|| GeomError::HalvingDegenerate("refined families do not share an order type".into()))?;
    Ok(SameTypeCertificate { trimmed, parent_map, separators, order_type, alpha: alpha.clone(), rho, volume, steps })
}

/// Order type of the family hulls when every transversal shares it.
pub fn uniform_order_type(families: &[Vec<ConvexBody>]) -> Result<Option<OrderType>> {
    let hulls = families
        .iter()
        .map(|f| ConvexBody::new(f.iter().flat_map(|b| b.vertices().iter().cloned()).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(match family_order_type(&hulls)? {
        FamilyOrderType::Uniform(t) => Some(t),
        FamilyOrderType::Mixed { .. } => None,
    })
}

/// Re-derives every claim of a certificate from the input families.
pub fn verify_same_type(families: &[Vec<ConvexBody>], cert: &SameTypeCertificate) -> bool {
    let m = families.len();
    if cert.trimmed.len() != m || cert.parent_map.len() != m {
        return false;
    }
    let Some(d) = families.iter().flatten().next().map(ConvexBody::dim) else {
        return false;
    };
    let steps = step_count(d, m);
    let size_factor = pow(&survival_fraction(&cert.alpha), steps);
    let rho = families.iter().flatten().map(ConvexBody::volume).min().unwrap();
    if cert.rho != rho || cert.volume != pow(&cert.alpha, steps) * &rho || cert.steps != steps {
        return false;
    }
    for i in 0..m {
        if cert.trimmed[i].len() != cert.parent_map[i].len()
            || Rational::from_integer((cert.trimmed[i].len() as i64).into())
                < &size_factor * Rational::from_integer((families[i].len() as i64).into())
        {
            return false;
        }
        for (b, &p) in cert.trimmed[i].iter().zip(&cert.parent_map[i]) {
            let Some(parent) = families[i].get(p) else {
                return false;
            };
            if b.volume() != cert.volume || !b.vertices().iter().all(|v| parent.contains(v)) {
                return false;
            }
        }
    }
    cert.separators.iter().all(|s| separator_holds(&cert.trimmed, s))
        && uniform_order_type(&cert.trimmed).is_ok_and(|t| t.as_ref() == Some(&cert.order_type))
}

/// Cuts a body (d <= 2) to volume exactly `target`, keeping vertex
/// `anchor` of its hull: intervals keep a prefix, polygons keep a fan from
/// the anchor, whose area is linear along the last edge.
pub fn cut_to_volume(body: &ConvexBody, target: &Rational, anchor: usize) -> Result<ConvexBody> {
    let vol = body.volume();
    if vol < *target {
        return Err(invalid("body is smaller than the target volume"));
    }
    if vol == *target {
        return Ok(body.clone());
    }
    let v = body.extreme_vertices();
    match body.dim() {
        1 => {
            let (a, b) = (&v[anchor % 2], &v[1 - anchor % 2]);
            let dir = if b.0[0] > a.0[0] { target.clone() } else { -target.clone() };
            ConvexBody::new(vec![a.clone(), Point(vec![&a.0[0] + dir])])
        }
        2 => {
            let k = v.len();
            let ring: Vec<&Point> = (0..k).map(|i| &v[(anchor + i) % k]).collect();
            let tri = |p: &Point, q: &Point| {
                let (u, w) = (p.sub(ring[0]), q.sub(ring[0]));
                (&u[0] * &w[1] - &u[1] * &w[0]) / Rational::from_integer(2.into())
            };
            let mut acc = Rational::zero();
            for j in 1..k - 1 {
                let a = tri(ring[j], ring[j + 1]);
                if &acc + &a >= *target {
                    let t = (target - &acc) / &a;
                    let p = ring[j].add_vec(&ring[j + 1].sub(ring[j]).iter().map(|x| x * &t).collect::<Vec<_>>());
                    let mut pts: Vec<Point> = ring[..=j].iter().map(|p| (*p).clone()).collect();
                    pts.push(p);
                    return ConvexBody::new(pts);
                }
                acc += a;
            }
            unreachable!("fan areas sum to the polygon area")
        }
        d => Err(GeomError::Unsupported(format!("exact volume cuts need d <= 2, got {d}"))),
    }
}

/// Shrinks a piece lying on one side of `plane` to volume exactly `target`
/// while moving it strictly off the plane: a homothety about the vertex
/// farthest from the plane, then an exact cut anchored at that vertex.
fn trim_away(body: &ConvexBody, target: &Rational, plane: &Hyperplane) -> Result<ConvexBody> {
    let d = body.dim();
    let vol = body.volume();
    if vol <= *target {
        return Err(GeomError::HalvingDegenerate("piece volume equals the threshold; it touches the cut".into()));
    }
    let verts = body.extreme_vertices();
    let dist = |p: &Point| (dot(&plane.normal, &p.0) - &plane.offset).abs();
    let far = (0..verts.len())
        .max_by(|&a, &b| dist(&verts[a]).cmp(&dist(&verts[b])).then_with(|| b.cmp(&a)))
        .unwrap();
    let ratio = to_f64(&(target / &vol)).powf(1.0 / d as f64);
    let mut f = rational_above(ratio, 1_000_000_000);
    let step = Rational::new(1.into(), 1_000_000_000.into());
    while pow(&f, d) * &vol < *target {
        f += &step;
    }
    if f >= Rational::one() {
        return Err(GeomError::HalvingDegenerate("piece volume too close to the threshold".into()));
    }
    let scaled = body.scale_about(&verts[far], &f);
    let anchor = scaled.extreme_vertices().iter().position(|p| *p == verts[far]).expect("fixed point of the homothety");
    cut_to_volume(&scaled, target, anchor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn square(x: Rational, y: Rational) -> ConvexBody {
        ConvexBody::cuboid(&[x.clone(), y.clone()], &[x + int(1), y + int(1)])
    }

    #[test]
    fn cuts_are_exact() {
        let sq = square(int(0), int(0));
        for anchor in 0..4 {
            let c = cut_to_volume(&sq, &rat(1, 3), anchor).unwrap();
            assert_eq!(c.volume(), rat(1, 3));
            assert!(c.vertices().iter().all(|v| sq.contains(v)));
        }
        let seg = ConvexBody::new(vec![Point::from_i64(&[0]), Point::from_i64(&[2])]).unwrap();
        assert_eq!(cut_to_volume(&seg, &rat(1, 2), 1).unwrap().volume(), rat(1, 2));
    }

    #[test]
    fn separated_triangle_of_squares() {
        let fams: Vec<Vec<ConvexBody>> = [(0, 0), (100, 0), (0, 100)]
            .iter()
            .map(|&(x, y)| (0..4).map(|k| square(int(x) + rat(k, 10), int(y) + rat(k, 7))).collect())
            .collect();
        match separability_check(&fams) {
            Separability::Separated(s) => {
                assert_eq!(s.len(), 3);
                assert!(s.iter().all(|x| separator_holds(&fams, x)));
            }
            other => panic!("{other:?}"),
        }
        assert!(uniform_order_type(&fams).unwrap().is_some());
        let cert = same_type_refine(&fams, &rat(1, 3)).unwrap();
        assert!(verify_same_type(&fams, &cert));
        assert_eq!(cert.volume, rat(1, 27));
        // Halving runs regardless of the initial separation, so bodies drop out.
        assert!(cert.trimmed.iter().all(|f| !f.is_empty()));
    }

    #[test]
    fn interpenetrating_families() {
        let a = vec![square(int(0), int(0)), square(int(4), int(4))];
        let b = vec![square(int(4), int(0)), square(int(0), int(4))];
        let c = vec![square(int(20), int(20))];
        assert_eq!(separability_check(&[a, b, c]), Separability::Counterexample(vec![0]));
    }

    #[test]
    fn interleaved_families_meet_bounds() {
        let fams: Vec<Vec<ConvexBody>> = (0..3)
            .map(|i| (0..8).map(|k| square(rat(3 * k + i, 2), rat((5 * k + 3 * i) % 8, 3))).collect())
            .collect();
        let cert = same_type_refine(&fams, &rat(1, 3)).unwrap();
        assert!(verify_same_type(&fams, &cert));
        assert!(cert.trimmed.iter().all(|f| !f.is_empty()));
        assert_eq!(cert.volume, rat(1, 27));
    }

    #[test]
    fn intervals_on_the_line() {
        let seg = |a: i64| ConvexBody::new(vec![Point::from_i64(&[a]), Point::from_i64(&[a + 2])]).unwrap();
        let fams = vec![vec![seg(0), seg(1), seg(5)], vec![seg(2), seg(3)]];
        let cert = same_type_refine(&fams, &rat(1, 3)).unwrap();
        assert!(verify_same_type(&fams, &cert));
    }
}
