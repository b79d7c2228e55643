//! Constructive quantitative selection theorems for convex polytopes, with
//! exactly checkable certificates.
//!
//! All containment and volume claims are made in exact rational arithmetic.
//! Floating point is used only inside searches (the inscribed-ellipsoid
//! optimizer, the colorful Caratheodory heuristic, direction sampling and
//! ham-sandwich bisection), whose outputs are rationalized and re-checked.

pub mod combin;
pub mod ellipsoid;
pub mod error;
pub mod geom;
pub mod linalg;
pub mod lp;
pub mod num;
pub mod par;
pub mod rng;
pub mod sametype;
pub mod selection;
pub mod tverberg;

pub use error::{GeomError, Result};
pub use num::Rational;
