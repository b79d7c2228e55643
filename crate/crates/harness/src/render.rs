//! SVG drawings of planar instances and their certificates.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::certificate::*;
use crate::error::HarnessError;
use crate::instance::Instance;
use crate::json::{parse_coords, EllipsoidJson, SegmentJson, WitnessJson};
use quantsel::num::to_f64;
use quantsel::GeomError;

const SIZE: f64 = 800.0;
const PAD: f64 = 40.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];
const WITNESS: &str = "#111111";

struct View {
    min: [f64; 2],
    scale: f64,
}

impl View {
    fn x(&self, p: &[f64]) -> f64 {
        PAD + self.scale * (p[0] - self.min[0])
    }

    fn y(&self, p: &[f64]) -> f64 {
        SIZE - PAD - self.scale * (p[1] - self.min[1])
    }

    fn pt(&self, p: &[f64]) -> String {
        format!("{:.3},{:.3}", self.x(p), self.y(p))
    }
}

fn floats(v: &[String]) -> Result<Vec<f64>, HarnessError> {
    Ok(parse_coords(v)?.iter().map(to_f64).collect())
}

fn ellipse(out: &mut String, v: &View, e: &EllipsoidJson, color: &str) -> Result<(), HarnessError> {
    let c = floats(&e.center)?;
    let a: Vec<Vec<f64>> = e.shape.iter().map(|r| floats(r)).collect::<Result<_, _>>()?;
    let s = v.scale;
    writeln!(
        out,
        r#"<ellipse rx="1" ry="1" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="2" vector-effect="non-scaling-stroke" transform="matrix({:.6} {:.6} {:.6} {:.6} {:.3} {:.3})"/>"#,
        s * a[0][0],
        -s * a[1][0],
        s * a[0][1],
        -s * a[1][1],
        v.x(&c),
        v.y(&c)
    )
    .unwrap();
    Ok(())
}

fn segment(out: &mut String, v: &View, s: &SegmentJson, color: &str, width: f64) -> Result<(), HarnessError> {
    let (a, b) = (floats(&s.a)?, floats(&s.b)?);
    writeln!(
        out,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="{width}"/>"#,
        v.x(&a),
        v.y(&a),
        v.x(&b),
        v.y(&b)
    )
    .unwrap();
    Ok(())
}

fn polygon(out: &mut String, v: &View, pts: &[Vec<f64>], color: &str, width: f64, dashed: bool) {
    let ring: Vec<String> = pts.iter().map(|p| v.pt(p)).collect();
    let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
    writeln!(
        out,
        r#"<polygon points="{}" fill="{color}" fill-opacity="0.08" stroke="{color}" stroke-width="{width}"{dash}/>"#,
        ring.join(" ")
    )
    .unwrap();
}

/// Draws every body once, in its family color or, when the certificate
/// selects it, in the color of its tuple or transversal with a heavier
/// stroke; then the certificate's witnesses in black.
pub fn render_svg(instance: &Instance, cert: Option<&Certificate>) -> Result<String, HarnessError> {
    if instance.dimension != 2 {
        return Err(GeomError::Unsupported(format!("rendering needs d = 2, got {}", instance.dimension)).into());
    }
    instance.validate()?;
    // Hull-ordered vertex lists for polygons; segments keep their endpoints.
    let shapes: Vec<Vec<Vec<Vec<f64>>>> = instance
        .families
        .iter()
        .map(|f| {
            f.iter()
                .map(|b| {
                    let body = b.to_body()?;
                    let pts = if body.is_full_dimensional() { body.extreme_vertices().to_vec() } else { body.vertices().to_vec() };
                    Ok(pts.iter().map(|p| p.to_f64()).collect())
                })
                .collect::<Result<Vec<_>, HarnessError>>()
        })
        .collect::<Result<_, _>>()?;
    let all: Vec<&Vec<f64>> = shapes.iter().flatten().flatten().collect();
    let min = [0, 1].map(|k| all.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min));
    let max = [0, 1].map(|k| all.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max));
    let extent = (max[0] - min[0]).max(max[1] - min[1]).max(1e-9);
    let view = View { min, scale: (SIZE - 2.0 * PAD) / extent };

    let mut groups: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut mark = |g: usize, members: &mut dyn Iterator<Item = (usize, usize)>| {
        for m in members {
            groups.entry(m).or_insert(g);
        }
    };
    let mut overlay = String::new();
    if let Some(cert) = cert {
        match cert.kind {
            CertKind::John => {
                for e in cert.payload_as::<JohnPayload>()?.ellipsoids.iter().flatten() {
                    ellipse(&mut overlay, &view, e, WITNESS)?;
                }
            }
            CertKind::Tverberg => {
                let p: TverbergPayload = cert.payload_as()?;
                for (g, part) in p.parts.iter().enumerate() {
                    mark(g, &mut part.iter().map(|&i| (0, i)));
                }
                ellipse(&mut overlay, &view, &p.witness, WITNESS)?;
            }
            CertKind::ColorfulTverberg => {
                let p: ColorfulPayload = cert.payload_as()?;
                for (g, t) in p.transversals.iter().enumerate() {
                    mark(g, &mut p.family_subset.iter().copied().zip(t.iter().copied()));
                }
                ellipse(&mut overlay, &view, &p.witness, WITNESS)?;
            }
            CertKind::DiameterTverberg => {
                let p: DiameterPayload = cert.payload_as()?;
                for (g, t) in p.transversals.iter().enumerate() {
                    mark(g, &mut t.iter().copied().enumerate());
                }
                segment(&mut overlay, &view, &p.witness, WITNESS, 4.0)?;
            }
            CertKind::Selection => {
                let p: SelectionPayload = cert.payload_as()?;
                if let Some(t) = p.hit_tuples.first() {
                    mark(0, &mut t.iter().map(|&i| (p.family, i)));
                }
                match &p.witness {
                    WitnessJson::Ellipsoid { center, shape } => ellipse(
                        &mut overlay,
                        &view,
                        &EllipsoidJson { center: center.clone(), shape: shape.clone() },
                        WITNESS,
                    )?,
                    WitnessJson::Segment { a, b } => {
                        segment(&mut overlay, &view, &SegmentJson { a: a.clone(), b: b.clone() }, WITNESS, 4.0)?
                    }
                }
            }
            CertKind::Epsnet => {
                for e in &cert.payload_as::<EpsNetPayload>()?.pieces {
                    ellipse(&mut overlay, &view, e, WITNESS)?;
                }
            }
            CertKind::Sametype => {
                let p: SameTypePayload = cert.payload_as()?;
                for (f, fam) in p.trimmed.iter().enumerate() {
                    for b in fam {
                        let pts = b.to_body()?.extreme_vertices().iter().map(|q| q.to_f64()).collect::<Vec<_>>();
                        polygon(&mut overlay, &view, &pts, PALETTE[f % PALETTE.len()], 2.5, true);
                    }
                }
            }
            CertKind::Homogeneous => {
                let p: HomogeneousPayload = cert.payload_as()?;
                for (f, s) in p.subfamilies.iter().enumerate() {
                    mark(0, &mut s.iter().map(|&i| (f, i)));
                }
                ellipse(&mut overlay, &view, &p.witness, WITNESS)?;
            }
        }
    }

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (f, fam) in shapes.iter().enumerate() {
        for (i, pts) in fam.iter().enumerate() {
            let (color, width) = match groups.get(&(f, i)) {
                Some(g) => (PALETTE[(g + 3) % PALETTE.len()], 3.0),
                None => (PALETTE[f % PALETTE.len()], 1.0),
            };
            if pts.len() == 2 {
                writeln!(
                    out,
                    r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="{width}"/>"#,
                    view.x(&pts[0]),
                    view.y(&pts[0]),
                    view.x(&pts[1]),
                    view.y(&pts[1])
                )
                .unwrap();
            } else {
                polygon(&mut out, &view, pts, color, width, false);
            }
        }
    }
    out.push_str(&overlay);
    out.push_str("</svg>\n");
    Ok(out)
}
