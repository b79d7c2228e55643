//! Runs the searches on an instance and packages the results as
//! certificates. Bounds come from the verifier, so every emitted
//! certificate re-verifies by construction.

use serde::Serialize;

use crate::certificate::*;
use crate::error::{fail, HarnessError};
use crate::instance::Instance;
use crate::json::{coords, rat_str, BodyJson, EllipsoidJson, SegmentJson, WitnessJson};
use crate::verify::{check, net_variant};
use quantsel::ellipsoid::john_ellipsoid;
use quantsel::geom::ConvexBody;
use quantsel::num::Rational;
use quantsel::sametype::{homogeneous_selection_bruteforce, same_type_refine};
use quantsel::selection::{
    max_parts, selection_2d_with, selection_quadratic_with, selection_simplex_with, weak_epsnet, Mode,
    SelectionOptions,
};
use quantsel::tverberg::{colorful_tverberg_segments, reduced_colorful_tverberg, tverberg_ellipsoids_with, Strategy};
use quantsel::GeomError;

fn seal(kind: CertKind, instance: &Instance, payload: &impl Serialize) -> Result<Certificate, HarnessError> {
    let value = serde_json::to_value(payload).expect("payloads serialize");
    let bounds = check(kind, instance, &value)
        .map_err(|e| fail(format!("search produced a certificate that does not verify: {e}")))?;
    Ok(Certificate::new(kind, instance.hash(), &value, bounds))
}

pub fn john(instance: &Instance) -> Result<Certificate, HarnessError> {
    let fams = instance.bodies()?;
    let ellipsoids = fams
        .iter()
        .map(|f| f.iter().map(|b| john_ellipsoid(b).map(|e| EllipsoidJson::from_ellipsoid(&e))).collect())
        .collect::<quantsel::Result<Vec<Vec<_>>>>()?;
    seal(CertKind::John, instance, &JohnPayload { ellipsoids })
}

#[derive(Clone, Debug)]
pub struct SelectArgs {
    pub variant: String,
    pub mode: String,
    pub seed: u64,
    /// Tverberg parts for the reduction variants; fitted to the family when absent.
    pub parts: Option<usize>,
    pub samples: Option<usize>,
}

impl Default for SelectArgs {
    fn default() -> Self {
        SelectArgs { variant: "quadratic".into(), mode: "volume".into(), seed: 0, parts: None, samples: None }
    }
}

pub fn select(instance: &Instance, args: &SelectArgs) -> Result<Certificate, HarnessError> {
    let fams = instance.bodies()?;
    let family = &fams[0];
    let d = instance.dimension;
    let mut opts = SelectionOptions { seed: args.seed, ..SelectionOptions::default() };
    if let Some(s) = args.samples {
        opts.samples = s;
    }
    let mode = match args.mode.as_str() {
        "volume" => Mode::Volume,
        "diameter" => Mode::Diameter,
        m => return Err(GeomError::InvalidInput(format!("unknown mode {m:?}")).into()),
    };
    if mode == Mode::Diameter && args.variant != "quadratic" {
        return Err(GeomError::InvalidInput("diameter mode uses the quadratic variant".into()).into());
    }
    let result = match args.variant.as_str() {
        "quadratic" => selection_quadratic_with(family, mode, &opts)?,
        v @ ("steinitz" | "simplex") => {
            opts.parts = Some(args.parts.unwrap_or_else(|| max_parts(d, family.len())));
            if v == "steinitz" {
                selection_2d_with(family, &opts)?
            } else {
                selection_simplex_with(family, &opts)?
            }
        }
        v => return Err(GeomError::InvalidInput(format!("unknown variant {v:?}")).into()),
    };
    let payload = SelectionPayload {
        variant: args.variant.clone(),
        mode: args.mode.clone(),
        family: 0,
        tuple_size: result.tuple_size,
        witness: WitnessJson::from_witness(&result.witness),
        hit_tuples: result.hit_tuples,
    };
    seal(CertKind::Selection, instance, &payload)
}

pub fn epsnet(instance: &Instance, epsilon: &Rational, variant: &str, seed: u64) -> Result<Certificate, HarnessError> {
    let fams = instance.bodies()?;
    let v = net_variant(variant).ok_or_else(|| GeomError::InvalidInput(format!("unknown variant {variant:?}")))?;
    let net = weak_epsnet(&fams[0], epsilon, v, seed)?;
    if net.failed {
        return Err(GeomError::NotFound("a selection step failed; the net is partial".into()).into());
    }
    let payload = EpsNetPayload {
        variant: variant.into(),
        epsilon: rat_str(epsilon),
        family: 0,
        subfamily_size: net.subfamily_size,
        pieces: net.pieces.iter().map(EllipsoidJson::from_ellipsoid).collect(),
        sources: net.sources,
    };
    seal(CertKind::Epsnet, instance, &payload)
}

/// One family: ellipsoid Tverberg on the inscribed ellipsoids. Several
/// families: the reduced colorful version on the bodies themselves.
pub fn tverberg(instance: &Instance, r: usize, seed: u64) -> Result<Certificate, HarnessError> {
    let fams = instance.bodies()?;
    if fams.len() == 1 {
        let es = fams[0].iter().map(john_ellipsoid).collect::<quantsel::Result<Vec<_>>>()?;
        let strategy = match seed {
            0 => Strategy::Auto,
            s => Strategy::Heuristic { seed: s },
        };
        let (partition, witness) = tverberg_ellipsoids_with(&es, r, strategy)?;
        let payload = TverbergPayload {
            r,
            ellipsoids: es.iter().map(EllipsoidJson::from_ellipsoid).collect(),
            parts: partition.parts,
            witness: EllipsoidJson::from_ellipsoid(&witness),
        };
        return seal(CertKind::Tverberg, instance, &payload);
    }
    let out = reduced_colorful_tverberg(&fams, r)?;
    let payload = ColorfulPayload {
        r,
        family_subset: out.transversals.family_subset.clone().unwrap_or_else(|| (0..fams.len()).collect()),
        transversals: out.transversals.transversals,
        witness: EllipsoidJson::from_ellipsoid(&out.witness),
    };
    seal(CertKind::ColorfulTverberg, instance, &payload)
}

pub fn tverberg_diameter(instance: &Instance, r: usize, seed: u64) -> Result<Certificate, HarnessError> {
    let fams = instance.segments()?;
    let out = colorful_tverberg_segments(&fams, r, seed)?;
    let payload = DiameterPayload {
        r,
        transversals: out.transversals.transversals,
        witness: SegmentJson::from_segment(&out.witness),
        direction: coords(&out.cap.direction),
        threshold: rat_str(&out.cap.threshold),
        covered: out.cap.covered,
    };
    seal(CertKind::DiameterTverberg, instance, &payload)
}

pub fn sametype(instance: &Instance, alpha: &Rational) -> Result<Certificate, HarnessError> {
    let fams = instance.bodies()?;
    let cert = same_type_refine(&fams, alpha)?;
    let payload = SameTypePayload {
        alpha: rat_str(&cert.alpha),
        rho: rat_str(&cert.rho),
        volume: rat_str(&cert.volume),
        steps: cert.steps,
        trimmed: cert.trimmed.iter().map(|f| f.iter().map(BodyJson::from_body).collect()).collect(),
        parent_map: cert.parent_map,
        separators: cert
            .separators
            .iter()
            .map(|s| SeparatorJson {
                left: s.left.clone(),
                right: s.right.clone(),
                normal: coords(&s.plane.normal),
                offset: rat_str(&s.plane.offset),
            })
            .collect(),
        order_type: cert
            .order_type
            .signs
            .iter()
            .map(|(subset, &sign)| OrientationJson { subset: subset.clone(), sign })
            .collect(),
    };
    seal(CertKind::Sametype, instance, &payload)
}

pub fn homogeneous(instance: &Instance, target: &Rational) -> Result<Certificate, HarnessError> {
    let fams: Vec<Vec<ConvexBody>> = instance.bodies()?;
    let out = homogeneous_selection_bruteforce(&fams, target)?;
    let payload = HomogeneousPayload {
        target: rat_str(target),
        subfamilies: out.subfamilies,
        witness: EllipsoidJson::from_ellipsoid(&out.witness),
    };
    seal(CertKind::Homogeneous, instance, &payload)
}
