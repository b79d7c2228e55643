//! Selection theorems for families of convex bodies, the refinement and
//! reduction lemmas they rely on, and greedy weak nets.

mod epsnet;
mod point_selection;
mod quadratic;
mod reduction;
mod slab;
mod steinitz;
mod vol_planes;
mod witness;

pub use epsnet::{pierced, unpierced_subfamilies, weak_epsnet, EpsNet, NetVariant, EXHAUSTIVE_FAMILY, SUBFAMILY_DRAWS};
pub use point_selection::{deepest_candidate, point_selection, simplex_depth};
pub use quadratic::{diameter_segment, selection_quadratic, selection_quadratic_with, Mode};
pub use reduction::{max_parts, required_bodies, selection_2d, selection_2d_with, selection_simplex, selection_simplex_with};
pub use slab::slab_instance;
pub use steinitz::{hull_contains_ball, steinitz_radius, steinitz_reduce};
pub use vol_planes::{vol_planes_refine, VolPlanes};
pub use witness::{hit_tuples, witness_in_hull, SelectionWitness, Witness, MAX_TUPLES};

#[derive(Clone, Debug)]
pub struct SelectionOptions {
    pub seed: u64,
    /// Tuples sampled by the partition-based selections.
    pub samples: usize,
    /// Tverberg part count; defaults to the lifted dimension `d(d+3)/2`.
    pub parts: Option<usize>,
    /// Overrides the tuple size of the lifted selection.
    pub tuple_size: Option<usize>,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions { seed: 0, samples: 4, parts: None, tuple_size: None }
    }
}
