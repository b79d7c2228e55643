//! Tverberg partitions for points, ellipsoids and segments, and the
//! reduced colorful variant for polytope families.

mod diameter;
mod ellipsoids;
mod minnorm;
mod points;
mod reduce;

pub use diameter::{
    cap_threshold, colorful_tverberg_segments, common_direction, rational_unit_vector, segment_certificate_holds,
    threshold_rational, width_certificate_holds, CapWitness, Segment, SegmentTverberg,
};
pub use ellipsoids::{certify_ellipsoid_parts, colorful_tverberg_ellipsoids, tverberg_ellipsoids, tverberg_ellipsoids_with};
pub use minnorm::min_norm_point;
pub(crate) use diameter::random_direction;
pub use points::{
    colorful_tverberg_points, colorful_tverberg_points_seeded, common_point, partition_count, transversal_count,
    tverberg_points, tverberg_points_with, Partition, Strategy, TransversalSet, EXHAUSTIVE_LIMIT,
};
pub use reduce::{reduce_transversals, reduced_colorful_tverberg, ReducedColorful, ReducedTransversals};
