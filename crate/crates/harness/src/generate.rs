//! Seeded instance generators. Each family draws from its own labelled
//! stream, so output depends only on the parameters and the seed.

use rand::Rng;

use crate::error::HarnessError;
use crate::instance::{Instance, InstanceKind};
use crate::json::rat_str;
use quantsel::geom::{ConvexBody, Point};
use quantsel::num::{int, rat, Rational};
use quantsel::rng::substream;
use quantsel::selection::slab_instance;
use quantsel::tverberg::Segment;
use quantsel::GeomError;

/// Grid resolution for random rational coordinates.
const GRID: i64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    RandomSquares,
    Slabs,
    ClusteredIntervals,
    UnitSegments,
    IdenticalBodies,
}

impl GenKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "randomSquares" => GenKind::RandomSquares,
            "slabs" => GenKind::Slabs,
            "clusteredIntervals" => GenKind::ClusteredIntervals,
            "unitSegments" => GenKind::UnitSegments,
            "identicalBodies" => GenKind::IdenticalBodies,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            GenKind::RandomSquares => "randomSquares",
            GenKind::Slabs => "slabs",
            GenKind::ClusteredIntervals => "clusteredIntervals",
            GenKind::UnitSegments => "unitSegments",
            GenKind::IdenticalBodies => "identicalBodies",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenParams {
    pub d: usize,
    /// Bodies per family.
    pub n: usize,
    pub families: usize,
    pub epsilon: Rational,
    /// Side of the placement window.
    pub window: Rational,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { d: 2, n: 8, families: 1, epsilon: rat(1, 4), window: int(2), seed: 0 }
    }
}

fn grid_in(rng: &mut impl Rng, lo: &Rational, hi: &Rational) -> Rational {
    let k = rng.random_range(0..=GRID);
    lo + (hi - lo) * rat(k, GRID)
}

fn unit_cube_at(corner: Vec<Rational>) -> ConvexBody {
    let hi: Vec<Rational> = corner.iter().map(|c| c + int(1)).collect();
    ConvexBody::cuboid(&corner, &hi)
}

/// Unit-length segment starting at `a`; the direction is the exact unit
/// vector `(1 - t^2, 2t) / (1 + t^2)`, possibly negated.
fn unit_segment(a: Point, t: &Rational, flip: bool) -> Segment {
    let den = int(1) + t * t;
    let mut u = vec![(int(1) - t * t) / &den, int(2) * t / &den];
    if flip {
        u.iter_mut().for_each(|x| *x = -x.clone());
    }
    let b = a.add_vec(&u);
    Segment { a, b }
}

pub fn generate(kind: GenKind, p: &GenParams) -> Result<Instance, HarnessError> {
    let invalid = |m: &str| HarnessError::Geom(GeomError::InvalidInput(m.into()));
    if p.d == 0 || p.n == 0 || p.families == 0 {
        return Err(invalid("dimension, body count and family count must be positive"));
    }
    let mut inst = match kind {
        GenKind::RandomSquares => {
            if p.window < int(1) {
                return Err(invalid("window must be at least 1"));
            }
            let span = &p.window - int(1);
            let fams: Vec<Vec<ConvexBody>> = (0..p.families)
                .map(|f| {
                    let mut r = substream(p.seed, "randomSquares", f as u64);
                    (0..p.n).map(|_| unit_cube_at((0..p.d).map(|_| grid_in(&mut r, &int(0), &span)).collect())).collect()
                })
                .collect();
            let kind = if p.families > 1 { InstanceKind::ColorFamilies } else { InstanceKind::Bodies };
            Instance::from_bodies(kind, &fams, Some(p.seed))
        }
        GenKind::Slabs => {
            let fam = slab_instance(p.d, &p.epsilon, p.n)?;
            let mut inst = Instance::from_bodies(InstanceKind::Bodies, &[fam], Some(p.seed));
            inst.metadata.insert("epsilon".into(), rat_str(&p.epsilon));
            inst
        }
        GenKind::ClusteredIntervals => {
            if p.d != 1 {
                return Err(invalid("clustered intervals live on the line"));
            }
            let fams: Vec<Vec<ConvexBody>> = (0..p.families)
                .map(|f| {
                    let mut r = substream(p.seed, "clusteredIntervals", f as u64);
                    (0..p.n)
                        .map(|_| {
                            let a = grid_in(&mut r, &int(-1), &int(0));
                            ConvexBody::new(vec![Point(vec![a.clone()]), Point(vec![a + int(2)])]).expect("interval")
                        })
                        .collect()
                })
                .collect();
            let kind = if p.families > 1 { InstanceKind::ColorFamilies } else { InstanceKind::Bodies };
            Instance::from_bodies(kind, &fams, Some(p.seed))
        }
        GenKind::UnitSegments => {
            if p.d != 2 {
                return Err(invalid("unit segments are generated in the plane"));
            }
            let fams: Vec<Vec<Segment>> = (0..p.families)
                .map(|f| {
                    let mut r = substream(p.seed, "unitSegments", f as u64);
                    (0..p.n)
                        .map(|_| {
                            let a = Point(vec![grid_in(&mut r, &int(0), &p.window), grid_in(&mut r, &int(0), &p.window)]);
                            let t = grid_in(&mut r, &int(-1), &int(1));
                            unit_segment(a, &t, r.random_bool(0.5))
                        })
                        .collect()
                })
                .collect();
            Instance::from_segments(&fams, Some(p.seed))
        }
        GenKind::IdenticalBodies => {
            let fams: Vec<Vec<ConvexBody>> =
                (0..p.families).map(|_| (0..p.n).map(|_| unit_cube_at(vec![int(0); p.d])).collect()).collect();
            let kind = if p.families > 1 { InstanceKind::ColorFamilies } else { InstanceKind::Bodies };
            Instance::from_bodies(kind, &fams, Some(p.seed))
        }
    };
    inst.metadata.insert("generator".into(), kind.name().into());
    Ok(inst)
}
