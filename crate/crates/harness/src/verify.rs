//! Independent re-checking of certificates. Every claim is re-derived from
//! the instance and the certificate alone, in exact arithmetic; the bounds
//! a certificate reports must equal the re-derived ones.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;

use crate::certificate::*;
use crate::error::{fail, HarnessError};
use crate::instance::Instance;
use crate::json::{parse_coords, rat, rat_str};
use quantsel::combin::Combinations;
use quantsel::ellipsoid::{param_dim, Ellipsoid};
use quantsel::geom::{contains_ellipsoid, ConvexBody, Hyperplane, OrderType};
use quantsel::num::{abs, binomial, ceil_to_usize, int, Rational};
use quantsel::sametype::{homogeneous_witness_holds, verify_same_type, SameTypeCertificate, Separator};
use quantsel::selection::{pierced, witness_in_hull, NetVariant, Witness, MAX_TUPLES};
use quantsel::tverberg::{
    certify_ellipsoid_parts, segment_certificate_holds, threshold_rational, width_certificate_holds, CapWitness,
    TransversalSet,
};

type Checked = Result<Bounds, HarnessError>;

fn ensure(cond: bool, msg: &str) -> Result<(), HarnessError> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg))
    }
}

/// Parse failures inside a payload count as verification failures.
fn parsed<T>(r: quantsel::Result<T>) -> Result<T, HarnessError> {
    r.map_err(|e| fail(e.to_string()))
}

fn bound(out: &mut Bounds, key: &str, v: &Rational) {
    out.insert(key.into(), rat_str(v));
}

fn count(n: usize) -> Rational {
    int(n as i64)
}

fn strictly_increasing(v: &[usize], below: usize) -> bool {
    v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| i < below)
}

fn inside(body: &ConvexBody, e: &Ellipsoid) -> bool {
    body.hull().is_ok_and(|h| contains_ellipsoid(&h.hrep, e))
}

/// Full check: instance hash, seal, payload claims and bounds.
pub fn verify(instance: &Instance, cert: &Certificate) -> Result<(), HarnessError> {
    ensure(cert.instance_hash == instance.hash(), "instance hash mismatch")?;
    ensure(cert.seal == cert.digest(), "seal does not match the certificate contents")?;
    let derived = check(cert.kind, instance, &cert.payload)?;
    if derived != cert.achieved_bounds {
        return Err(fail(format!("reported bounds {:?} differ from re-derived {:?}", cert.achieved_bounds, derived)));
    }
    Ok(())
}

/// Checks a payload against an instance and returns the exact bounds it
/// achieves.
pub fn check(kind: CertKind, instance: &Instance, payload: &serde_json::Value) -> Checked {
    fn load<T: DeserializeOwned>(v: &serde_json::Value) -> Result<T, HarnessError> {
        serde_json::from_value(v.clone()).map_err(|e| fail(format!("payload: {e}")))
    }
    match kind {
        CertKind::John => check_john(instance, &load(payload)?),
        CertKind::Tverberg => check_tverberg(instance, &load(payload)?),
        CertKind::ColorfulTverberg => check_colorful(instance, &load(payload)?),
        CertKind::DiameterTverberg => check_diameter(instance, &load(payload)?),
        CertKind::Selection => check_selection(instance, &load(payload)?),
        CertKind::Epsnet => check_epsnet(instance, &load(payload)?),
        CertKind::Sametype => check_sametype(instance, &load(payload)?),
        CertKind::Homogeneous => check_homogeneous(instance, &load(payload)?),
    }
}

fn check_john(instance: &Instance, p: &JohnPayload) -> Checked {
    let fams = instance.bodies()?;
    ensure(p.ellipsoids.len() == fams.len(), "family count")?;
    let mut min_ratio: Option<Rational> = None;
    for (f, es) in fams.iter().zip(&p.ellipsoids) {
        ensure(f.len() == es.len(), "one ellipsoid per body")?;
        for (b, e) in f.iter().zip(es) {
            let e = parsed(e.to_ellipsoid())?;
            ensure(e.dim() == b.dim() && inside(b, &e), "ellipsoid not inside its body")?;
            let r = e.volume_lower_bound() / b.volume();
            if min_ratio.as_ref().is_none_or(|m| r < *m) {
                min_ratio = Some(r);
            }
        }
    }
    let mut out = Bounds::new();
    bound(&mut out, "bodies", &count(fams.iter().map(Vec::len).sum()));
    bound(&mut out, "minVolumeRatioLower", &min_ratio.expect("validated instances are nonempty"));
    Ok(out)
}

fn check_tverberg(instance: &Instance, p: &TverbergPayload) -> Checked {
    let fams = instance.bodies()?;
    ensure(fams.len() == 1, "ellipsoid Tverberg certificates take a single family")?;
    let bodies = &fams[0];
    ensure(p.ellipsoids.len() == bodies.len(), "one ellipsoid per body")?;
    let es = p.ellipsoids.iter().map(|e| parsed(e.to_ellipsoid())).collect::<Result<Vec<_>, _>>()?;
    ensure(bodies.iter().zip(&es).all(|(b, e)| e.dim() == b.dim() && inside(b, e)), "ellipsoid not inside its body")?;
    ensure(p.r >= 1 && p.parts.len() == p.r, "part count differs from r")?;
    let mut seen: Vec<usize> = p.parts.iter().flatten().copied().collect();
    seen.sort_unstable();
    ensure(seen == (0..bodies.len()).collect::<Vec<_>>(), "parts do not partition the family")?;
    ensure(p.parts.iter().all(|q| !q.is_empty()), "empty part")?;
    let witness = parsed(p.witness.to_ellipsoid())?;
    let parts: Vec<Vec<Ellipsoid>> = p.parts.iter().map(|q| q.iter().map(|&i| es[i].clone()).collect()).collect();
    ensure(parsed(certify_ellipsoid_parts(&parts, &witness))?, "witness not in the hull of every part")?;
    let mut out = Bounds::new();
    bound(&mut out, "parts", &count(p.r));
    bound(&mut out, "witnessDet", &witness.det());
    Ok(out)
}

fn check_colorful(instance: &Instance, p: &ColorfulPayload) -> Checked {
    let fams = instance.bodies()?;
    ensure(!p.family_subset.is_empty() && strictly_increasing(&p.family_subset, fams.len()), "family subset")?;
    ensure(p.r >= 1 && p.transversals.len() == p.r, "transversal count differs from r")?;
    for t in &p.transversals {
        ensure(t.len() == p.family_subset.len(), "transversal length")?;
        ensure(t.iter().zip(&p.family_subset).all(|(&i, &f)| i < fams[f].len()), "transversal index")?;
    }
    let ts = TransversalSet { transversals: p.transversals.clone(), family_subset: Some(p.family_subset.clone()) };
    ensure(ts.is_disjoint(), "transversals share a body")?;
    let witness = parsed(p.witness.to_ellipsoid())?;
    let w = Witness::Ellipsoid(witness.clone());
    for t in &p.transversals {
        let members: Vec<&ConvexBody> = t.iter().zip(&p.family_subset).map(|(&i, &f)| &fams[f][i]).collect();
        ensure(witness_in_hull(&w, &members), "witness not in a transversal hull")?;
    }
    let mut out = Bounds::new();
    bound(&mut out, "parts", &count(p.r));
    bound(&mut out, "witnessDet", &witness.det());
    Ok(out)
}

fn check_diameter(instance: &Instance, p: &DiameterPayload) -> Checked {
    let fams = instance.segments()?;
    let d = instance.dimension;
    ensure(p.r >= 1 && p.transversals.len() == p.r, "transversal count differs from r")?;
    for t in &p.transversals {
        ensure(t.len() == fams.len() && t.iter().zip(&fams).all(|(&i, f)| i < f.len()), "transversal index")?;
    }
    let direction = parsed(p.direction.iter().map(|s| rat(s)).collect::<quantsel::Result<Vec<_>>>())?;
    ensure(direction.len() == d, "direction dimension")?;
    let threshold = parsed(rat(&p.threshold))?;
    ensure(threshold == threshold_rational(d), "threshold is not the cap threshold")?;
    ensure(p.covered.len() == fams.len(), "covered lists")?;
    for (f, cov) in fams.iter().zip(&p.covered) {
        let expect: Vec<usize> =
            (0..f.len()).filter(|&i| abs(&f[i].width_along(&direction)) >= threshold).collect();
        ensure(*cov == expect, "covered segments do not match the direction")?;
    }
    let witness = parsed(p.witness.to_segment())?;
    let ts = TransversalSet { transversals: p.transversals.clone(), family_subset: None };
    ensure(segment_certificate_holds(&fams, &ts, &witness), "witness not in a transversal hull")?;
    let cap = CapWitness { direction: direction.clone(), threshold: threshold.clone(), covered: p.covered.clone() };
    ensure(width_certificate_holds(&cap, &witness), "witness width below the threshold")?;
    let mut out = Bounds::new();
    bound(&mut out, "parts", &count(p.r));
    bound(&mut out, "threshold", &threshold);
    bound(&mut out, "width", &witness.width_along(&direction));
    Ok(out)
}

fn selection_tuple_size(variant: &str, mode: &str, d: usize) -> Option<usize> {
    match (variant, mode) {
        ("quadratic", "volume") => Some(param_dim(d) + 1),
        ("quadratic", "diameter") => Some(2 * d + 1),
        ("steinitz", "volume") => Some(2 * d),
        ("simplex", "volume") => Some(d + 1),
        _ => None,
    }
}

fn check_selection(instance: &Instance, p: &SelectionPayload) -> Checked {
    let fams = instance.bodies()?;
    let family = fams.get(p.family).ok_or_else(|| fail("family index"))?;
    let d = instance.dimension;
    let size = selection_tuple_size(&p.variant, &p.mode, d).ok_or_else(|| fail("unknown variant or mode"))?;
    ensure(p.tuple_size == size, "tuple size does not match the variant")?;
    let witness = parsed(p.witness.to_witness())?;
    ensure(witness.dim() == d, "witness dimension")?;
    ensure(matches!(witness, Witness::Segment(_)) == (p.mode == "diameter"), "witness type does not match the mode")?;
    let n = family.len();
    ensure(size <= n && binomial(n, size) <= MAX_TUPLES, "tuple enumeration out of range")?;
    let hits: Vec<Vec<usize>> = Combinations::new(n, size)
        .filter(|t| witness_in_hull(&witness, &t.iter().map(|&i| &family[i]).collect::<Vec<_>>()))
        .collect();
    ensure(hits == p.hit_tuples, "hit tuples differ from exhaustive recount")?;
    ensure(!hits.is_empty(), "witness lies in no tuple hull")?;
    let mut out = Bounds::new();
    bound(&mut out, "fraction", &Rational::new(hits.len().into(), binomial(n, size).into()));
    bound(&mut out, "hits", &count(hits.len()));
    bound(&mut out, "tupleSize", &count(size));
    bound(&mut out, "minVolume", &family.iter().map(ConvexBody::volume).min().expect("nonempty"));
    match &witness {
        Witness::Ellipsoid(e) => bound(&mut out, "witnessDet", &e.det()),
        Witness::Segment(s) => bound(&mut out, "witnessLengthSq", &s.length_sq()),
    }
    Ok(out)
}

pub fn net_variant(name: &str) -> Option<NetVariant> {
    match name {
        "quadratic" => Some(NetVariant::Quadratic),
        "steinitz" => Some(NetVariant::Steinitz),
        "simplex" => Some(NetVariant::Simplex),
        _ => None,
    }
}

fn check_epsnet(instance: &Instance, p: &EpsNetPayload) -> Checked {
    let fams = instance.bodies()?;
    let family = fams.get(p.family).ok_or_else(|| fail("family index"))?;
    let d = instance.dimension;
    let variant = net_variant(&p.variant).ok_or_else(|| fail("unknown variant"))?;
    let eps = parsed(rat(&p.epsilon))?;
    ensure(eps > int(0) && eps <= int(1), "epsilon out of range")?;
    let n = family.len();
    let s = ceil_to_usize(&(&eps * count(n))).max(1);
    ensure(p.subfamily_size == s, "subfamily size is not ceil(eps n)")?;
    ensure(!p.pieces.is_empty() && p.pieces.len() == p.sources.len(), "one source per piece")?;
    let pieces = p.pieces.iter().map(|e| parsed(e.to_ellipsoid())).collect::<Result<Vec<_>, _>>()?;
    for (e, src) in pieces.iter().zip(&p.sources) {
        ensure(src.len() == s && strictly_increasing(src, n), "source subfamily")?;
        let members: Vec<&ConvexBody> = src.iter().map(|&i| &family[i]).collect();
        ensure(witness_in_hull(&Witness::Ellipsoid(e.clone()), &members), "piece outside its source hull")?;
    }
    ensure(binomial(n, s) <= MAX_TUPLES, "too many subfamilies to verify")?;
    let unpierced = Combinations::new(n, s).find(|m| !pierced(family, m, &pieces));
    ensure(unpierced.is_none(), "some subfamily hull holds no piece")?;
    let alpha = variant.alpha(d);
    let mut out = Bounds::new();
    bound(&mut out, "size", &count(pieces.len()));
    bound(&mut out, "subfamilySize", &count(s));
    if s >= alpha {
        let cb = Rational::new(binomial(n, alpha).into(), binomial(s, alpha).into()) + int(1);
        bound(&mut out, "countingBound", &cb);
    }
    bound(&mut out, "minPieceVolumeLower", &pieces.iter().map(Ellipsoid::volume_lower_bound).min().expect("nonempty"));
    Ok(out)
}

fn check_sametype(instance: &Instance, p: &SameTypePayload) -> Checked {
    let fams = instance.bodies()?;
    let d = instance.dimension;
    let trimmed = p
        .trimmed
        .iter()
        .map(|f| f.iter().map(|b| parsed(b.to_body())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let separators = p
        .separators
        .iter()
        .map(|s| {
            let plane = parsed(Hyperplane::new(parse_coords(&s.normal).map_err(|e| fail(e.to_string()))?, parsed(rat(&s.offset))?))?;
            Ok(Separator { left: s.left.clone(), right: s.right.clone(), plane })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    ensure(separators.len() == p.steps, "one separator per halving step")?;
    let m = fams.len();
    for s in &separators {
        ensure(!s.left.is_empty() && !s.right.is_empty(), "empty separator side")?;
        ensure(strictly_increasing(&s.left, m) && strictly_increasing(&s.right, m), "separator sides")?;
        ensure(s.left.iter().all(|i| !s.right.contains(i)), "separator sides overlap")?;
    }
    let mut signs = BTreeMap::new();
    for o in &p.order_type {
        ensure(signs.insert(o.subset.clone(), o.sign).is_none(), "repeated order-type entry")?;
    }
    let cert = SameTypeCertificate {
        trimmed,
        parent_map: p.parent_map.clone(),
        separators,
        order_type: OrderType { dim: d, signs },
        alpha: parsed(rat(&p.alpha))?,
        rho: parsed(rat(&p.rho))?,
        volume: parsed(rat(&p.volume))?,
        steps: p.steps,
    };
    ensure(verify_same_type(&fams, &cert), "same-type certificate does not hold")?;
    let mut out = Bounds::new();
    bound(&mut out, "volume", &cert.volume);
    bound(&mut out, "volumeRatio", &(&cert.volume / &cert.rho));
    bound(&mut out, "minSize", &count(cert.trimmed.iter().map(Vec::len).min().unwrap_or(0)));
    bound(&mut out, "steps", &count(cert.steps));
    Ok(out)
}

fn check_homogeneous(instance: &Instance, p: &HomogeneousPayload) -> Checked {
    let fams = instance.bodies()?;
    let target = parsed(rat(&p.target))?;
    ensure(target > int(0) && target <= int(1), "target out of range")?;
    ensure(p.subfamilies.len() == fams.len(), "one subfamily per family")?;
    for (s, f) in p.subfamilies.iter().zip(&fams) {
        ensure(strictly_increasing(s, f.len()), "subfamily indices")?;
        ensure(s.len() >= ceil_to_usize(&(&target * count(f.len()))).max(1), "subfamily below the target size")?;
    }
    let witness = parsed(p.witness.to_ellipsoid())?;
    ensure(homogeneous_witness_holds(&fams, &p.subfamilies, &witness), "witness outside a transversal hull")?;
    let mut out = Bounds::new();
    bound(&mut out, "witnessDet", &witness.det());
    bound(&mut out, "minSize", &count(p.subfamilies.iter().map(Vec::len).min().unwrap_or(0)));
    Ok(out)
}
