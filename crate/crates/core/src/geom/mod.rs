//! Exact geometric primitives over rational coordinates.

mod arrangement;
mod body;
mod hull;
mod order_type;
mod predicates;

pub use arrangement::{arrangement_cells, spanned_hyperplanes, Cell};
pub use body::{intersect_bodies, polytope_volume, ConvexBody};
pub use hull::{convex_hull, Hull};
pub use order_type::{family_order_type, order_type_of, FamilyOrderType, OrderType};
pub use predicates::{
    affine_rank, contains_ellipsoid, hull_weights, orientation, point_in_hull, segment_in_hull,
    strict_separator,
};

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{invalid, Result};
use crate::linalg::dot;
use crate::num::{fmt_rational, int, to_f64, Rational};

/// A point of `R^d` with exact rational coordinates. Ordered
/// lexicographically by coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn origin(d: usize) -> Self {
        Point(vec![Rational::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn sub(&self, other: &Point) -> Vec<Rational> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn add_vec(&self, v: &[Rational]) -> Point {
        Point(self.0.iter().zip(v).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, f: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * f).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    /// Average of a nonempty point list.
    pub fn centroid(points: &[Point]) -> Point {
        let d = points[0].dim();
        let mut acc = vec![Rational::zero(); d];
        for p in points {
            for (a, x) in acc.iter_mut().zip(&p.0) {
                *a += x;
            }
        }
        let n = int(points.len() as i64);
        Point(acc.into_iter().map(|a| a / &n).collect())
    }

    pub fn check_dims(points: &[Point]) -> Result<usize> {
        let d = points.first().ok_or_else(|| invalid("empty point list"))?.dim();
        if d == 0 {
            return Err(invalid("points must have dimension at least 1"));
        }
        if points.iter().any(|p| p.dim() != d) {
            return Err(invalid("points of mixed dimension"));
        }
        Ok(d)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The closed halfspace `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    /// `offset - <normal, p>`; nonnegative exactly on the halfspace.
    pub fn slack(&self, p: &Point) -> Rational {
        &self.offset - dot(&self.normal, &p.0)
    }

    pub fn contains(&self, p: &Point) -> bool {
        !self.slack(p).is_negative()
    }

    /// Scales so the first nonzero normal coordinate has absolute value 1.
    pub fn normalized(mut self) -> Self {
        crate::num::normalize_leading(&mut self.normal, &mut self.offset);
        self
    }

    pub fn flipped(&self) -> Self {
        Halfspace {
            normal: self.normal.iter().map(|a| -a).collect(),
            offset: -self.offset.clone(),
        }
    }
}

/// Facet description of a full-dimensional polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl HRep {
    pub fn contains(&self, p: &Point) -> bool {
        self.halfspaces.iter().all(|h| h.contains(p))
    }

    pub fn contains_strictly(&self, p: &Point) -> bool {
        self.halfspaces.iter().all(|h| h.slack(p).is_positive())
    }
}

/// The hyperplane `<normal, x> = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(invalid("hyperplane normal must be nonzero"));
        }
        Ok(Hyperplane { normal, offset })
    }

    /// Sign of `<normal, p> - offset`.
    pub fn side(&self, p: &Point) -> i8 {
        crate::num::sign(&(dot(&self.normal, &p.0) - &self.offset))
    }

    pub fn normalized(mut self) -> Self {
        crate::num::normalize_leading(&mut self.normal, &mut self.offset);
        self
    }

    /// The closed side `<normal, x> <= offset`.
    pub fn lower(&self) -> Halfspace {
        Halfspace::new(self.normal.clone(), self.offset.clone())
    }

    pub fn upper(&self) -> Halfspace {
        self.lower().flipped()
    }
}
