use std::collections::BTreeMap;

use super::{orientation, ConvexBody, Point};
use crate::combin::Combinations;
use crate::error::{invalid, Result};

/// Orientation signs of all (d+1)-subsets of an indexed configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderType {
    pub dim: usize,
    pub signs: BTreeMap<Vec<usize>, i8>,
}

pub fn order_type_of(points: &[Point]) -> Result<OrderType> {
    let d = Point::check_dims(points)?;
    if points.len() < d + 1 {
        return Err(invalid(format!("need at least {} points, got {}", d + 1, points.len())));
    }
    let mut signs = BTreeMap::new();
    for s in Combinations::new(points.len(), d + 1) {
        let sub: Vec<Point> = s.iter().map(|&i| points[i].clone()).collect();
        signs.insert(s, orientation(&sub)?);
    }
    Ok(OrderType { dim: d, signs })
}

/// Result of checking whether all transversals of a body list share an
/// order type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyOrderType {
    Uniform(OrderType),
    /// Two vertex selections (one vertex index per body) whose orientations
    /// differ on `subset`.
    Mixed { subset: Vec<usize>, first: Vec<usize>, second: Vec<usize> },
}

/// Checks every vertex selection per (d+1)-subset; by multilinearity of the
/// orientation determinant this decides all selections from the bodies.
pub fn family_order_type(bodies: &[ConvexBody]) -> Result<FamilyOrderType> {
    let d = bodies.first().ok_or_else(|| invalid("no bodies"))?.dim();
    if bodies.len() < d + 1 {
        return Err(invalid(format!("need at least {} bodies, got {}", d + 1, bodies.len())));
    }
    if bodies.iter().any(|b| b.dim() != d) {
        return Err(invalid("bodies of mixed dimension"));
    }
    let verts: Vec<&[Point]> = bodies.iter().map(|b| b.extreme_vertices()).collect();
    let mut signs = BTreeMap::new();
    for s in Combinations::new(bodies.len(), d + 1) {
        let mut choice = vec![0usize; d + 1];
        let mut seen: Option<(i8, Vec<usize>)> = None;
        loop {
            let pts: Vec<Point> = s.iter().zip(&choice).map(|(&b, &v)| verts[b][v].clone()).collect();
            let sg = orientation(&pts)?;
            match &seen {
                None => seen = Some((sg, choice.clone())),
                Some((first_sign, first_choice)) if *first_sign != sg => {
                    let expand = |c: &[usize]| {
                        let mut full = vec![0usize; bodies.len()];
                        for (&b, &v) in s.iter().zip(c) {
                            full[b] = v;
                        }
                        full
                    };
                    return Ok(FamilyOrderType::Mixed {
                        subset: s.clone(),
                        first: expand(first_choice),
                        second: expand(&choice),
                    });
                }
                _ => {}
            }
            // Odometer over the vertex product.
            let mut k = 0;
            while k <= d {
                choice[k] += 1;
                if choice[k] < verts[s[k]].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k > d {
                break;
            }
        }
        signs.insert(s, seen.unwrap().0);
    }
    Ok(FamilyOrderType::Uniform(OrderType { dim: d, signs }))
}
