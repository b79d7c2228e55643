//! Monte Carlo volume of an intersection of polytopes, an oracle that
//! shares nothing with the exact volume code beyond the facet list.

use rand::Rng;

use quantsel::geom::ConvexBody;
use quantsel::num::to_f64;
use quantsel::{par, rng};

const CHUNK: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// `estimate -+ 3 sigma`, widened by one sample's worth of volume.
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

struct FloatBody {
    rows: Vec<(Vec<f64>, f64)>,
}

impl FloatBody {
    fn new(b: &ConvexBody) -> Option<Self> {
        let h = b.hull().ok()?;
        Some(FloatBody {
            rows: h.hrep.halfspaces.iter().map(|hs| (hs.normal.iter().map(to_f64).collect(), to_f64(&hs.offset))).collect(),
        })
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.rows.iter().all(|(a, b)| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() <= *b)
    }
}

/// Hit-ratio estimate over the bounding box of the first body.
pub fn mc_volume(bodies: &[ConvexBody], samples: usize, seed: u64) -> McEstimate {
    let empty = McEstimate { estimate: 0.0, lo: 0.0, hi: 0.0, samples };
    let Some(first) = bodies.first() else {
        return empty;
    };
    let Some(floats) = bodies.iter().map(FloatBody::new).collect::<Option<Vec<_>>>() else {
        return empty;
    };
    let d = first.dim();
    let verts: Vec<Vec<f64>> = first.vertices().iter().map(|p| p.to_f64()).collect();
    let lo: Vec<f64> = (0..d).map(|k| verts.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..d).map(|k| verts.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let chunks = samples.div_ceil(CHUNK);
    let hits: usize = par::map_range(chunks, |c| {
        let mut r = rng::substream(seed, "mc-volume", c as u64);
        let m = CHUNK.min(samples - c * CHUNK);
        let mut x = vec![0.0; d];
        (0..m)
            .filter(|_| {
                for k in 0..d {
                    x[k] = r.random_range(lo[k]..=hi[k]);
                }
                floats.iter().all(|f| f.contains(&x))
            })
            .count()
    })
    .into_iter()
    .sum();
    let n = samples.max(1) as f64;
    let p = hits as f64 / n;
    let half = 3.0 * box_vol * (p * (1.0 - p) / n).sqrt() + box_vol / n;
    let estimate = p * box_vol;
    McEstimate { estimate, lo: (estimate - half).max(0.0), hi: estimate + half, samples }
}
