//! The per-edge complete descriptor `(d, θ, φ, τ)` and the transform that
//! computes it for every directed edge of a graph.
//!
//! For an edge `i → j` with `f_i`, `s_i` the nearest and second-nearest
//! neighbors of `i`:
//!
//! * `θ` is the angle between `p_i → p_{f_i}` and `p_i → p_j`;
//! * `φ` is the signed dihedral about `i → f_i` from the half-plane through
//!   `s_i` to the half-plane through `j`;
//! * `τ` is the signed dihedral about `i → j` from the half-plane through
//!   `f_{i\j}` to the half-plane through `f_{j\i}`, where `f_{i\j}` is the
//!   nearest neighbor of `i` other than `j`.
//!
//! Dihedrals follow the right-hand rule about their axis (see [`dihedral`]).
//! When a reference node is missing or a defining plane is collinear the
//! angle is set to 0 and the edge carries the matching [`EdgeFlags`] bit.

mod angles;
mod tuples;

pub use angles::{angle_between, angular_distance, dihedral, wrap_angle, EPS_VEC};
pub use tuples::{
    edge_tuple, reference_excluding, transform, transform_par, transform_with_ops, tuples_for, EdgeFlags, EdgeTuple,
    OpCount, TupleRefs, TupleSet,
};
