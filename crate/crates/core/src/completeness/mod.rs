//! Inverse of the tuple transform: coordinates are rebuilt node by node
//! from `(d, θ, φ, τ)` and compared against the source after optimal rigid
//! alignment.

mod align;
mod discriminate;
mod placement;
mod reconstruct;

pub use align::{align, AlignmentReport};
pub use discriminate::{
    compare_graphs, compare_tuples, discriminate, Comparison, Deviation, TupleField, Verdict, DISCRIMINATION_TOLERANCE,
};
pub use placement::{place_case1, place_case2};
pub use reconstruct::{
    reconstruct, reconstruct_with_tolerance, round_trip, PlacementCase, ReconstructionResult, RECONSTRUCTION_TOLERANCE,
};
