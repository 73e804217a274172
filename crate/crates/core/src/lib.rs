//! Complete, SE(3)-invariant per-edge geometry for 3D molecular graphs.
//!
//! Every directed edge `i → j` of a radius graph is described by a distance,
//! a polar angle, an azimuth and a rotation angle `(d, θ, φ, τ)`. The set of
//! tuples determines the structure up to rotation and translation, which
//! [`completeness::reconstruct`] demonstrates by rebuilding coordinates.

pub mod basis;
pub mod bench;
pub mod completeness;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod mpnet;

pub use error::{Error, Result};
pub use geometry::{transform, EdgeTuple, TupleSet};
pub use graph::{build_radius_graph, Graph3D, Topology, Vec3};
