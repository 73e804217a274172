//! File formats: XYZ geometry, tuple CSV/JSON and topology JSON.

pub mod tuples;
pub mod xyz;

use crate::error::{Error, Result};
use crate::graph::Topology;

pub use tuples::{tuples_from_csv, tuples_from_json, tuples_to_csv, tuples_to_json, CSV_HEADER};
pub use xyz::{atomic_number, element_symbol, format_xyz, format_xyz_frames, parse_xyz, XyzFrame};

/// Topology JSON: `{"species": [..], "edges": [[i, j], ..]}`.
pub fn topology_to_json(topology: &Topology) -> Result<String> {
    Ok(serde_json::to_string(topology)?)
}

pub fn topology_from_json(text: &str) -> Result<Topology> {
    let topology: Topology = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    topology.adjacency()?;
    Ok(topology)
}
