//! Ham-sandwich cuts, the same-type refinement with volume, separation
//! certificates, fractional Helly search and homogeneous selection.

mod ham;
mod helly;
mod homogeneous;
mod refine;

pub use ham::{halving_hyperplane, halving_point_1d, ham_sandwich_2d, MeasureFamily};
pub use helly::{best_witness, bodies_containing, fractional_helly_search, HellySubfamily, HELLY_TUPLES};
pub use homogeneous::{
    homogeneous_selection_bruteforce, homogeneous_witness_holds, HomogeneousSelection, HOMOGENEOUS_LIMIT, MAX_FAMILY,
};
pub use refine::{
    bipartition_subsets, cut_to_volume, same_type_refine, separability_check, separator_holds, step_count,
    survival_fraction, uniform_order_type, verify_same_type, SameTypeCertificate, Separability, Separator,
};
